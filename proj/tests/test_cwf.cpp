#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace pcwf;

namespace {

Ty flip_morph(const Ty& t, ArrId f, Elem rho, Elem u, Elem value) {
  auto copy = std::make_shared<TyInCtx>(*t);
  copy->morph[f.index][rho][u] = value;
  return copy;
}

bool has_law(const Report& r, const std::string& law) {
  for (const auto& v : r.violations())
    if (v.law == law) return true;
  return false;
}

}  // namespace

TEST_SUITE("cwf") {
  TEST_CASE("the empty context is terminal") {
    auto t = empty_ctx(terminal_cat());
    CHECK(t->size(ObjId{0}) == 1);
    auto wa = walking_arrow();
    auto e = empty_ctx(wa);
    CHECK(e->size(ObjId{0}) == 1);
    CHECK(e->size(ObjId{1}) == 1);
    CHECK(e->restrict(*wa->find_arrow("f"), 0) == 0);
    for (const auto& h : fixtures::contexts()) CHECK(enumerate_pshmaps(h, empty_ctx(h->base()), 10).size() == 1);
  }

  TEST_CASE("type and term validation") {
    for (const auto& h : fixtures::contexts()) {
      CHECK(validate_ty(*discrete_ty(h, FinSet{2, {}})).ok());
      CHECK(validate_tm(discrete_tm(h, FinSet{2, {}}, 1)).ok());
    }
    // A type whose morphisms are all identities, with one entry flipped.
    auto chain = chain_cat(3);
    auto t3 = discrete_ty(constant_presheaf(chain, FinSet{1, {}}), FinSet{2, {}});
    Report r = validate_ty(*flip_morph(t3, *chain->find_arrow("c0c2"), 0, 0, 1));
    CHECK_FALSE(r.ok());
    CHECK(has_law(r, "composition"));
    auto wa = walking_arrow();
    auto h = constant_presheaf(wa, FinSet{1, {}});
    auto t = discrete_ty(h, FinSet{2, {}});
    CHECK(validate_ty(*flip_morph(t, *wa->find_arrow("f"), 0, 0, 1)).ok());
    Report id_broken = validate_ty(*flip_morph(t, wa->id(ObjId{1}), 0, 0, 1));
    CHECK(has_law(id_broken, "identity"));
    CHECK(validate_ty(*flip_morph(t, *wa->find_arrow("f"), 0, 0, 5)).structural());
  }

  TEST_CASE("every generated type validates") {
    for (const auto& h : fixtures::contexts())
      for (const auto& t : fixtures::types_over(h, 2)) CHECK(validate_ty(*t).ok());
  }

  TEST_CASE("context extension, p and q") {
    auto t = terminal_cat();
    auto two = ctx_extend(empty_ctx(t), discrete_ty(empty_ctx(t), FinSet{2, {}}));
    CHECK(two->size(ObjId{0}) == 2);
    auto q2 = var_q(two);
    CHECK(q2.elem[0] == std::vector<Elem>{0, 1});

    for (const auto& h : fixtures::contexts()) {
      auto none = ctx_extend(h, discrete_ty(h, FinSet{0, {}}));
      for (std::uint32_t x = 0; x < h->base()->object_count(); ++x) CHECK(none->size(ObjId{x}) == 0);
      for (const auto& a : fixtures::types_over(h, 2)) {
        auto ext = ctx_extend(h, a);
        CHECK(validate_presheaf(*ext).ok());
        auto p = proj_p(ext);
        auto q = var_q(ext);
        CHECK(validate_pshmap(p).ok());
        CHECK(validate_tm(q).ok());
        CHECK(same_ty(q.ty, ty_subst(a, p)));
        for (std::uint32_t x = 0; x < h->base()->object_count(); ++x) {
          ObjId i{x};
          std::size_t total = 0;
          for (Elem rho = 0; rho < h->size(i); ++rho) {
            total += a->size(i, rho);
            for (Elem u = 0; u < a->size(i, rho); ++u) {
              Elem k = fixtures::pair_position(*a, i, rho, u);
              CHECK(p(i, k) == rho);
              CHECK(q(i, k) == u);
            }
          }
          CHECK(ext->size(i) == total);
        }
      }
    }
  }

  TEST_CASE("type and term substitution") {
    auto hs = fixtures::contexts();
    for (std::size_t gi = 0; gi < hs.size(); gi += 3) {
      const Ctx& g = hs[gi];
      auto types = fixtures::types_over(g, 2);
      for (const auto& hctx : hs) {
        if (hctx->base() != g->base() && !(*hctx->base() == *g->base())) continue;
        auto subs = enumerate_pshmaps(hctx, g, 64);
        for (const auto& s : subs) {
          for (std::size_t ti = 0; ti < types.size(); ti += 2) {
            const Ty& t = types[ti];
            Ty ts = ty_subst(t, s);
            CHECK(validate_ty(*ts).ok());
            const auto& c = *g->base();
            for (std::uint32_t x = 0; x < c.object_count(); ++x)
              for (Elem rho = 0; rho < hctx->size(ObjId{x}); ++rho)
                CHECK(ts->size(ObjId{x}, rho) == t->size(ObjId{x}, s(ObjId{x}, rho)));
            for (std::uint32_t f = 0; f < c.arrow_count(); ++f)
              for (Elem rho = 0; rho < hctx->size(c.cod(ArrId{f})); ++rho)
                CHECK(ts->morph[f][rho] == t->morph[f][s(c.cod(ArrId{f}), rho)]);
            for (const auto& m : first_terms(t, 4)) {
              auto ms = tm_subst(m, s);
              CHECK(validate_tm(ms).ok());
              for (std::uint32_t x = 0; x < c.object_count(); ++x)
                for (Elem rho = 0; rho < hctx->size(ObjId{x}); ++rho)
                  CHECK(ms(ObjId{x}, rho) == m(ObjId{x}, s(ObjId{x}, rho)));
            }
          }
          auto d = discrete_ty(g, FinSet{3, {}});
          CHECK(same_ty(ty_subst(d, s), discrete_ty(hctx, FinSet{3, {}})));
          CHECK(same_tm(tm_subst(discrete_tm(g, FinSet{3, {}}, 2), s), discrete_tm(hctx, FinSet{3, {}}, 2)));
        }
      }
      for (const auto& t : types) {
        CHECK(same_ty(ty_subst(t, identity_sub(g)), t));
        for (const auto& m : first_terms(t, 3)) CHECK(same_tm(tm_subst(m, identity_sub(g)), m));
      }
    }
  }

  TEST_CASE("substitution along composites") {
    auto wa = walking_arrow();
    auto ctxs = enumerate_presheaves(wa, 2, true, 1000);
    std::size_t checked = 0;
    for (const auto& g : ctxs)
      for (const auto& h : ctxs)
        for (const auto& k : ctxs) {
          auto sigmas = enumerate_pshmaps(h, g, 1000);
          auto deltas = enumerate_pshmaps(k, h, 1000);
          for (const auto& sigma : sigmas)
            for (const auto& delta : deltas)
              for (const auto& t : fixtures::types_over(g, 2)) {
                CHECK(same_ty(ty_subst(ty_subst(t, sigma), delta), ty_subst(t, compose_subs(sigma, delta))));
                for (const auto& m : first_terms(t, 2))
                  CHECK(same_tm(tm_subst(tm_subst(m, sigma), delta), tm_subst(m, compose_subs(sigma, delta))));
                ++checked;
              }
        }
    CHECK(checked > 100);
  }

  TEST_CASE("context map pairing") {
    for (const auto& g : fixtures::contexts()) {
      for (const auto& a : fixtures::types_over(g, 2)) {
        auto ga = ctx_extend(g, a);
        // (p; q) = 1
        CHECK(same_sub(sub_pair(proj_p(ga), ga, var_q(ga)), identity_sub(ga)));
        for (const auto& u : first_terms(a, 3)) {
          auto single = sub_single(ga, u);
          CHECK(validate_pshmap(single).ok());
          const auto& c = *g->base();
          for (std::uint32_t x = 0; x < c.object_count(); ++x)
            for (Elem rho = 0; rho < g->size(ObjId{x}); ++rho)
              CHECK(single(ObjId{x}, rho) == fixtures::pair_position(*a, ObjId{x}, rho, u(ObjId{x}, rho)));
          CHECK(same_sub(compose_subs(proj_p(ga), single), identity_sub(g)));
          CHECK(same_tm(tm_subst(var_q(ga), single), u));
        }
      }
    }
  }

  TEST_CASE("term enumeration agrees with exhaustive filtering") {
    for (const auto& h : fixtures::contexts())
      for (const auto& t : fixtures::types_over(h, 2)) {
        auto terms = enumerate_terms(t, 100000);
        CHECK(terms.size() == oracle::term_count(*t));
        for (const auto& m : terms) CHECK(validate_tm(m).ok());
      }
    auto empty = constant_presheaf(walking_arrow(), FinSet{0, {}});
    CHECK(enumerate_terms(discrete_ty(empty, FinSet{3, {}}), 10).size() == 1);
  }

  TEST_CASE("discrete terms are constant on connected contexts") {
    for (const auto& h : fixtures::contexts())
      for (std::size_t n = 0; n <= 3; ++n) {
        std::size_t components = oracle::element_components(*h);
        std::size_t expected = 1;
        for (std::size_t k = 0; k < components; ++k) expected *= n;
        CHECK(enumerate_terms(discrete_ty(h, FinSet{n, {}}), 100000).size() == expected);
      }
  }

  TEST_CASE("representable and presheaf types") {
    for (const auto& h : fixtures::contexts()) {
      const auto& c = *h->base();
      for (std::uint32_t x = 0; x < c.object_count(); ++x)
        for (Elem rho = 0; rho < h->size(ObjId{x}); ++rho) {
          auto t = representable_ty(h, ObjId{x}, rho);
          CHECK(validate_ty(*t).ok());
          CHECK(t->size(ObjId{x}, rho) >= 1);
        }
      CHECK(validate_ty(*presheaf_ty(h, h)).ok());
    }
  }
}
