#include "doctest.h"
#include "oracles.hpp"
#include "pcwf/catcore.hpp"
#include "pcwf/error.hpp"

using namespace pcwf;

namespace {

bool has_violation(const Report& r, const std::string& law, const std::string& location = {}) {
  for (const auto& v : r.violations())
    if (v.law == law && (location.empty() || v.location == location)) return true;
  return false;
}

// Same category with one composition entry replaced.
CategoryRef with_comp(const CategoryRef& c, ArrId f, ArrId g, std::optional<ArrId> h) {
  auto comp = c->comp_table();
  comp[f.index * c->arrow_count() + g.index] = h;
  return std::make_shared<FinCategory>(c->object_labels(), c->arrows(), c->identities(), comp);
}

Functor constant(const CategoryRef& c, ObjId x) {
  return Functor{c, c, std::vector<ObjId>(c->object_count(), x), std::vector<ArrId>(c->arrow_count(), c->id(x))};
}

std::vector<std::vector<std::size_t>> transpose(const std::vector<std::vector<std::size_t>>& m) {
  std::vector<std::vector<std::size_t>> t(m.size(), std::vector<std::size_t>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) t[j][i] = m[i][j];
  return t;
}

}  // namespace

TEST_SUITE("catcore") {
  TEST_CASE("built-in categories are valid") {
    for (const auto& c : {terminal_cat(), walking_arrow(), chain_cat(3), parallel_arrows(), discrete_cat(0),
                          discrete_cat(2)})
      CHECK(validate_category(*c).ok());
  }

  TEST_CASE("right identity violation is reported at f") {
    auto wa = walking_arrow();
    ArrId f = *wa->find_arrow("f");
    ArrId id_b = wa->id(*wa->find_object("b"));
    auto broken = with_comp(wa, f, id_b, id_b);
    Report r = validate_category(*broken);
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "right identity", "f"));
  }

  TEST_CASE("missing composite is a structural error naming the pair") {
    auto chain = chain_cat(3);
    ArrId f = chain->hom(ObjId{0}, ObjId{1})[0], g = chain->hom(ObjId{1}, ObjId{2})[0];
    Report r = validate_category(*with_comp(chain, f, g, std::nullopt));
    CHECK(r.structural());
    CHECK(has_violation(r, "missing composite",
                        chain->arrow(f).name + " then " + chain->arrow(g).name));
  }

  TEST_CASE("a non-associative table on a 3-object, 5-arrow shape is caught") {
    // Objects x, y, z; two endomorphisms e, e' of x. Search the tables of
    // composites among e, e' for one that is not associative.
    std::vector<std::string> objects = {"x", "y", "z"};
    std::vector<Arrow> arrows = {{"id_x", {0}, {0}}, {"id_y", {1}, {1}}, {"id_z", {2}, {2}},
                                 {"e", {0}, {0}},    {"e2", {0}, {0}}};
    std::vector<ArrId> ids = {ArrId{0}, ArrId{1}, ArrId{2}};
    const std::vector<std::uint32_t> endo = {0, 3, 4};
    bool found = false;
    oracle::for_each_assignment({3, 3, 3, 3}, [&](const std::vector<std::size_t>& v) {
      if (found) return;
      std::vector<std::optional<ArrId>> comp(25);
      auto at = [&](std::uint32_t f, std::uint32_t g) -> std::optional<ArrId>& { return comp[f * 5 + g]; };
      for (std::uint32_t f = 0; f < 5; ++f) {
        at(ids[arrows[f].dom.index].index, f) = ArrId{f};
        at(f, ids[arrows[f].cod.index].index) = ArrId{f};
      }
      at(3, 3) = ArrId{endo[v[0]]};
      at(3, 4) = ArrId{endo[v[1]]};
      at(4, 3) = ArrId{endo[v[2]]};
      at(4, 4) = ArrId{endo[v[3]]};
      bool associative = true;
      for (std::uint32_t a : endo)
        for (std::uint32_t b : endo)
          for (std::uint32_t c : endo)
            if (at(at(a, b)->index, c) != at(a, at(b, c)->index)) associative = false;
      if (associative) return;
      found = true;
      FinCategory cat(objects, arrows, ids, comp);
      Report r = validate_category(cat);
      CHECK(has_violation(r, "associativity"));
      CHECK_FALSE(has_violation(r, "left identity"));
      CHECK_FALSE(has_violation(r, "right identity"));
      for (const auto& viol : r.violations())
        if (viol.law == "associativity") CHECK(viol.location.front() == '(');
    });
    CHECK(found);
  }

  TEST_CASE("discrete and opposite categories") {
    CHECK(discrete_cat(0)->object_count() == 0);
    auto d2 = discrete_cat(2);
    CHECK(d2->object_count() == 2);
    CHECK(d2->arrow_count() == 2);
    CHECK(*op_cat(terminal_cat()) == *terminal_cat());
    auto wa_op = op_cat(walking_arrow());
    ArrId f = *wa_op->find_arrow("f");
    CHECK(wa_op->object_label(wa_op->dom(f)) == "b");
    CHECK(wa_op->object_label(wa_op->cod(f)) == "a");
    auto par = parallel_arrows();
    CHECK(hom_sizes(*op_cat(par)) == transpose(hom_sizes(*par)));
    CHECK(*op_cat(op_cat(chain_cat(3))) == *chain_cat(3));
  }

  TEST_CASE("functor validation and composition") {
    auto wa = walking_arrow();
    auto t = terminal_cat();
    CHECK(validate_functor(identity_functor(wa)).ok());
    Functor collapse{wa, t, {ObjId{0}, ObjId{0}}, {ArrId{0}, ArrId{0}, ArrId{0}}};
    CHECK(validate_functor(collapse).ok());
    Functor bad = identity_functor(wa);
    bad.arr_map[wa->find_arrow("f")->index] = wa->id(ObjId{0});
    CHECK_FALSE(validate_functor(bad).ok());
    CHECK(has_violation(validate_functor(bad), "arrow typing"));

    CHECK(compose_functors(identity_functor(wa), collapse) == collapse);
    CHECK(compose_functors(collapse, identity_functor(t)) == collapse);
    auto d1 = discrete_cat(1);
    Functor to_d1{t, d1, {ObjId{0}}, {ArrId{0}}};
    Functor direct{wa, d1, {ObjId{0}, ObjId{0}}, {ArrId{0}, ArrId{0}, ArrId{0}}};
    CHECK(compose_functors(collapse, to_d1) == direct);
  }

  TEST_CASE("functor enumeration agrees with brute force") {
    CHECK(enumerate_functors(discrete_cat(2), discrete_cat(3), 1000).size() == 9);
    auto cats = {terminal_cat(), walking_arrow(), parallel_arrows(), chain_cat(3), discrete_cat(2)};
    for (const auto& c : cats)
      for (const auto& d : cats)
        CHECK(enumerate_functors(c, d, 100000).size() == oracle::functor_count(*c, *d));
    CHECK(enumerate_functors(walking_arrow(), discrete_cat(0), 10).empty());
    CHECK_THROWS_AS(enumerate_functors(discrete_cat(2), discrete_cat(3), 5), BudgetExceeded);
  }

  TEST_CASE("natural transformations") {
    auto wa = walking_arrow();
    ObjId a{0}, b{1};
    ArrId f = *wa->find_arrow("f");
    Functor ca = constant(wa, a), cb = constant(wa, b);
    // Exactly one of the component choices passes.
    std::size_t passing = 0;
    for (std::uint32_t x = 0; x < wa->arrow_count(); ++x)
      for (std::uint32_t y = 0; y < wa->arrow_count(); ++y)
        passing += validate_nat_trans(NatTrans{ca, cb, {ArrId{x}, ArrId{y}}}).ok();
    CHECK(passing == 1);
    CHECK(validate_nat_trans(NatTrans{ca, cb, {f, f}}).ok());
    CHECK_FALSE(validate_nat_trans(NatTrans{ca, cb, {wa->id(a), wa->id(b)}}).ok());
    CHECK(enumerate_nat_trans(ca, cb, 100).size() == 1);
    CHECK(enumerate_nat_trans(cb, ca, 100).empty());
    auto d2 = discrete_cat(2);
    CHECK(enumerate_nat_trans(identity_functor(d2), identity_functor(d2), 100).size() == 1);

    // A passing transformation with one component flipped fails at f.
    NatTrans id_t = identity_trans(identity_functor(wa));
    CHECK(validate_nat_trans(id_t).ok());
    NatTrans broken = id_t;
    broken.components[b.index] = f;
    CHECK_FALSE(validate_nat_trans(broken).ok());
  }

  TEST_CASE("vertical composition is unital and associative") {
    auto wa = walking_arrow();
    auto endos = enumerate_functors(wa, wa, 1000);
    std::vector<NatTrans> all;
    for (const auto& f : endos)
      for (const auto& g : endos)
        for (const auto& t : enumerate_nat_trans(f, g, 1000)) all.push_back(t);
    REQUIRE(!all.empty());
    for (const auto& t : all) {
      CHECK(trans_comp(identity_trans(t.from), t) == t);
      CHECK(trans_comp(t, identity_trans(t.to)) == t);
    }
    for (const auto& t1 : all)
      for (const auto& t2 : all) {
        if (!(t1.to == t2.from)) continue;
        for (const auto& t3 : all) {
          if (!(t2.to == t3.from)) continue;
          CHECK(trans_comp(trans_comp(t1, t2), t3) == trans_comp(t1, trans_comp(t2, t3)));
        }
      }
  }

  TEST_CASE("functor categories") {
    for (const auto& c : {walking_arrow(), chain_cat(3), parallel_arrows()}) {
      auto fun = functor_category(discrete_cat(1), c, 1000);
      CHECK(validate_category(*fun).ok());
      CHECK(fun->object_count() == c->object_count());
      CHECK(hom_sizes(*fun) == hom_sizes(*c));
      auto to_terminal = functor_category(c, terminal_cat(), 1000);
      CHECK(to_terminal->object_count() == 1);
      CHECK(to_terminal->arrow_count() == 1);
    }
    auto d22 = functor_category(discrete_cat(2), discrete_cat(2), 1000);
    CHECK(d22->object_count() == 4);
    CHECK(d22->arrow_count() == 4);
  }

  TEST_CASE("full and faithful") {
    auto wa = walking_arrow();
    CHECK(is_full_and_faithful(identity_functor(wa)).full_and_faithful);
    Functor collapse{wa, terminal_cat(), {ObjId{0}, ObjId{0}}, {ArrId{0}, ArrId{0}, ArrId{0}}};
    CHECK_FALSE(is_full_and_faithful(collapse).full_and_faithful);
    Functor at_a{discrete_cat(1), wa, {ObjId{0}}, {wa->id(ObjId{0})}};
    CHECK(is_full_and_faithful(at_a).full_and_faithful);
  }

  TEST_CASE("category enumeration yields valid, pairwise distinct categories") {
    auto cats = enumerate_categories(2, 4);
    CHECK(cats.size() > 10);
    for (const auto& c : cats) {
      CHECK(validate_category(*c).ok());
      CHECK(c->object_count() <= 2);
      CHECK(c->arrow_count() <= 4);
    }
    // One-object categories with ≤3 arrows are the monoids of order ≤3:
    // 1 + 2 + 7 up to isomorphism (and anti-isomorphism is not identified).
    std::size_t one_object = 0;
    for (const auto& c : enumerate_categories(1, 3)) one_object += c->object_count() == 1;
    CHECK(one_object == 1 + 2 + 7);
  }
}
