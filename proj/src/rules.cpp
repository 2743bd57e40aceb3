#include "pcwf/rules.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "pcwf/error.hpp"

namespace pcwf {
namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 15];
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::optional<std::pair<ObjId, Elem>> last_element(const Presheaf& x) {
  const FinCategory& c = *x.base();
  for (std::uint32_t i = static_cast<std::uint32_t>(c.object_count()); i-- > 0;) {
    if (x.size(ObjId{i}) > 0) return std::pair{ObjId{i}, static_cast<Elem>(x.size(ObjId{i}) - 1)};
  }
  return std::nullopt;
}

Ctx empty_presheaf(const CategoryRef& c) {
  return std::make_shared<Presheaf>(c, std::vector<FinSet>(c->object_count()),
                                    std::vector<std::vector<Elem>>(c->arrow_count()));
}

struct Named {
  std::string name;
  Ty ty;
};

struct SubOption {
  std::string name;
  Ctx source;
  Sub map;
};

// Context maps into x: identity, a projection, a Yoneda element, the map
// out of the empty presheaf and a global element.
std::vector<SubOption> sub_options(const Ctx& x) {
  const CategoryRef& c = x->base();
  std::vector<SubOption> out;
  out.push_back({"1", x, identity_sub(x)});
  const Ctx ext = ctx_extend(x, discrete_ty(x, FinSet{2, {}}));
  out.push_back({"p", ext, proj_p(ext)});
  if (const auto last = last_element(*x)) {
    const auto [i0, rho0] = *last;
    const Ctx y = yoneda(c, i0);
    Sub m{y, x, {}};
    for (std::uint32_t j = 0; j < c->object_count(); ++j) {
      std::vector<Elem> comp;
      for (ArrId a : c->hom(ObjId{j}, i0)) comp.push_back(x->restrict(a, rho0));
      m.components.push_back(std::move(comp));
    }
    out.push_back({"y(" + c->object_label(i0) + ")@" + std::to_string(rho0), y, std::move(m)});
  }
  const Ctx zero = empty_presheaf(c);
  out.push_back({"0", zero, Sub{zero, x, std::vector<std::vector<Elem>>(c->object_count())}});
  const Ctx one = empty_ctx(c);
  if (auto globals = enumerate_pshmaps(one, x, 4096); !globals.empty()) {
    out.push_back({"pt", one, std::move(globals.back())});
  }
  return out;
}

std::vector<Named> type_pool(const Ctx& g, std::size_t g_index) {
  std::vector<Named> out;
  out.push_back({"{2}", discrete_ty(g, FinSet{2, {}})});
  const Ty g_as_type = presheaf_ty(g, g);
  out.push_back({"G", g_as_type});
  if (const auto last = last_element(*g)) {
    out.push_back({"rep", representable_ty(g, last->first, last->second)});
  }
  out.push_back({"{0}", discrete_ty(g, FinSet{0, {}})});
  if (g_index % 3 == 0) {
    const Ty two = discrete_ty(g, FinSet{2, {}});
    const Ctx ext = ctx_extend(g, two);
    out.push_back({"Sigma({2},G)", sigma_ty(two, ty_subst(g_as_type, proj_p(ext)))});
  }
  return out;
}

std::vector<Named> family_pool(const Ctx& g, const Ty& a, const Ctx& ga, const Sub& p) {
  std::vector<Named> out;
  out.push_back({"{2}", discrete_ty(ga, FinSet{2, {}})});
  out.push_back({"(A)p", ty_subst(a, p)});
  if (const auto last = last_element(*ga)) {
    out.push_back({"rep", representable_ty(ga, last->first, last->second)});
  }
  out.push_back({"(G)p", ty_subst(presheaf_ty(g, g), p)});
  return out;
}

std::string first_lines(const std::string& s, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    pos = s.find('\n', pos);
    if (pos == std::string::npos) return s;
    ++pos;
  }
  return s.substr(0, pos) + "...";
}

void derive(Fixture& fx, std::size_t pi_cap) {

  const std::pair<const char*, std::function<Report()>> checks[] = {
      {"G", [&] { return validate_presheaf(*fx.g); }},
      {"A", [&] { return validate_ty(*fx.a); }},
      {"G.A", [&] { return validate_presheaf(*fx.ga); }},
      {"B", [&] { return validate_ty(*fx.b); }},
      {"H", [&] { return validate_presheaf(*fx.h); }},
      {"K", [&] { return validate_presheaf(*fx.k); }},
      {"L", [&] { return validate_presheaf(*fx.l); }},
      {"sigma", [&] { return validate_pshmap(fx.sigma); }},
      {"delta", [&] { return validate_pshmap(fx.delta); }},
      {"nu", [&] { return validate_pshmap(fx.nu); }},
  };
  for (const auto& [what, check] : checks) {
    const Report r = check();
    if (!r.ok()) {
      fx.rejected = std::string(what) + " is invalid: " + first_lines(r.to_string(), 3);
      return;
    }
  }
  fx.p = proj_p(fx.ga);
  fx.q = var_q(fx.ga);
  fx.a_sigma = ty_subst(fx.a, fx.sigma);
  fx.shifted = shifted_sub(fx.sigma, fx.ga);
  fx.b_shifted = ty_subst(fx.b, fx.shifted);
  try {
    if (!fx.pi) fx.pi = pi_ty(fx.a, fx.b, pi_cap);
    fx.sigma_ty = sigma_ty(fx.a, fx.b);
    fx.pi_shifted = pi_ty(fx.a_sigma, fx.b_shifted, pi_cap);
    fx.sigma_shifted = sigma_ty(fx.a_sigma, fx.b_shifted);
  } catch (const Error& e) {
    fx.former_error = e.what();
  }
}

std::string fixture_digest(const Fixture& fx) {
  Json j;
  j["name"] = fx.name;
  j["G"] = fx.g->restrictions();
  j["A"] = ty_tables(*fx.a);
  j["B"] = ty_tables(*fx.b);
  j["sigma"] = sub_tables(fx.sigma);
  j["delta"] = sub_tables(fx.delta);
  j["nu"] = sub_tables(fx.nu);
  return hex64(fnv1a(j.dump()));
}

std::vector<Ctx> random_contexts(const SuiteConfig& config, std::size_t index, const CategoryRef& c) {
  std::mt19937_64 rng(config.seed * 0x9e3779b97f4a7c15ull + index);
  std::vector<Ctx> out;
  for (std::size_t attempt = 0; attempt < config.random_attempts && out.size() < config.random_contexts; ++attempt) {
    std::vector<FinSet> sets;
    for (std::size_t x = 0; x < c->object_count(); ++x) {
      sets.push_back({std::uniform_int_distribution<std::size_t>(0, config.max_set)(rng), {}});
    }
    std::vector<std::vector<Elem>> restrict;
    for (std::uint32_t f = 0; f < c->arrow_count(); ++f) {
      const std::size_t from = sets[c->cod(ArrId{f}).index].size, to = sets[c->dom(ArrId{f}).index].size;
      std::vector<Elem> table(from);
      if (to == 0 && from > 0) {
        restrict.push_back({});
        continue;
      }
      for (Elem& e : table) e = static_cast<Elem>(std::uniform_int_distribution<std::size_t>(0, to - 1)(rng));
      restrict.push_back(std::move(table));
    }
    auto h = std::make_shared<Presheaf>(c, std::move(sets), std::move(restrict));
    if (validate_presheaf(*h).ok()) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

std::vector<CategoryRef> base_categories(const SuiteConfig& config) {
  std::vector<CategoryRef> out = enumerate_categories(config.max_objects, config.max_arrows);
  if (config.include_chain) out.push_back(chain_cat(3));
  return out;
}

void gen_fixtures(const SuiteConfig& config, std::size_t index, const CategoryRef& base,
                  const std::function<void(const Fixture&)>& visit) {
  std::vector<Ctx> contexts;
  if (config.mode == FixtureMode::kExhaustive) {
    contexts = enumerate_presheaves(base, config.max_set, true, config.context_cap);
    // Representables too large for the size cap are still wanted.
    for (std::uint32_t x = 0; x < base->object_count(); ++x) {
      const Ctx y = yoneda(base, ObjId{x});
      bool small = true;
      for (const FinSet& s : y->sets()) small = small && s.size <= config.max_set;
      if (!small) contexts.push_back(y);
    }
  } else {
    contexts = random_contexts(config, index, base);
  }

  const std::string cat_name = "C" + std::to_string(index);
  for (std::size_t gi = 0; gi < contexts.size(); ++gi) {
    const Ctx& g = contexts[gi];
    std::vector<Named> types;
    try {
      types = type_pool(g, gi);
    } catch (const Error& e) {
      Fixture fx;
      fx.name = cat_name + "/G" + std::to_string(gi);
      fx.base = base;
      fx.g = g;
      fx.rejected = std::string("type pool: ") + e.what();
      visit(fx);
      continue;
    }
    for (std::size_t ai = 0; ai < types.size(); ++ai) {
      Fixture fx;
      fx.base = base;
      fx.g = g;
      fx.a = types[ai].ty;
      fx.name = cat_name + "/G" + std::to_string(gi) + "/A=" + types[ai].name;
      try {
        fx.ga = ctx_extend(g, fx.a);
        auto families = family_pool(g, fx.a, fx.ga, proj_p(fx.ga));
        // Function spaces out of the Σ-typed domain are kept small enough
        // for the Π cap: only families of size ≤ 2 per point.
        if (fx.a->kind == TypeKind::kSigma) families.resize(1);
        // B is the first family, in rotation order, whose Π(A, B) fits the cap.
        std::size_t chosen = (gi + ai) % families.size();
        for (std::size_t step = 0; step < families.size(); ++step) {
          const std::size_t candidate = (gi + ai + step) % families.size();
          try {
            fx.pi = pi_ty(fx.a, families[candidate].ty, config.pi_cap);
            chosen = candidate;
            break;
          } catch (const BudgetExceeded&) {
          }
        }
        const Named& b = families[chosen];
        fx.b = b.ty;
        const auto into_g = sub_options(g);
        const SubOption& s = into_g[(gi + ai) % into_g.size()];
        const auto into_h = sub_options(s.source);
        const SubOption& d = into_h[(gi + ai + 1) % into_h.size()];
        const auto into_k = sub_options(d.source);
        const SubOption& n = into_k[(gi + 2 * ai + 2) % into_k.size()];
        fx.h = s.source;
        fx.sigma = s.map;
        fx.k = d.source;
        fx.delta = d.map;
        fx.l = n.source;
        fx.nu = n.map;
        fx.name += "/B=" + b.name + "/sigma=" + s.name + "/delta=" + d.name + "/nu=" + n.name;
        derive(fx, config.pi_cap);
        fx.digest = fixture_digest(fx);
      } catch (const Error& e) {
        if (fx.rejected.empty()) fx.rejected = std::string("construction: ") + e.what();
      }
      visit(fx);
    }
  }
}

void gen_fixtures(const SuiteConfig& config, const std::function<void(const Fixture&)>& visit) {
  const auto bases = base_categories(config);
  for (std::size_t i = 0; i < bases.size(); ++i) gen_fixtures(config, i, bases[i], visit);
}

// ---------------------------------------------------------------------------
// Rule checks

namespace {

struct Failure {
  Json detail;
};

class Checker {
 public:
  Checker(const Fixture& fx, std::size_t cap) : fx_(fx), cap_(cap) {}

  std::vector<TmInCtx> terms(const Ty& t) const { return first_terms(t, cap_); }

  void valid(const Report& r, const std::string& what) const {
    if (!r.ok()) throw Failure{Json{{"check", what}, {"violations", r.to_json()["violations"]}}};
  }
  void holds(bool condition, const std::string& what) const {
    if (!condition) throw Failure{Json{{"check", what}}};
  }
  void same(const Ty& lhs, const Ty& rhs, const std::string& what) const {
    if (!same_ty(lhs, rhs)) throw Failure{Json{{"check", what}, {"lhs", ty_tables(*lhs)}, {"rhs", ty_tables(*rhs)}}};
  }
  void same(const TmInCtx& lhs, const TmInCtx& rhs, const std::string& what) const {
    if (!same_ty(lhs.ty, rhs.ty)) {
      throw Failure{Json{{"check", what + " (types differ)"}, {"lhs", ty_tables(*lhs.ty)}, {"rhs", ty_tables(*rhs.ty)}}};
    }
    if (lhs.elem != rhs.elem) throw Failure{Json{{"check", what}, {"lhs", tm_tables(lhs)}, {"rhs", tm_tables(rhs)}}};
  }
  void same(const Sub& lhs, const Sub& rhs, const std::string& what) const {
    if (!same_sub(lhs, rhs)) throw Failure{Json{{"check", what}, {"lhs", sub_tables(lhs)}, {"rhs", sub_tables(rhs)}}};
  }

  const Ty& former(const std::optional<Ty>& t, const char* what) const {
    if (!t) throw Failure{Json{{"check", std::string("build ") + what}, {"error", fx_.former_error}}};
    return *t;
  }
  const Ty& pi() const { return former(fx_.pi, "Pi(A,B)"); }
  const Ty& sigma() const { return former(fx_.sigma_ty, "Sigma(A,B)"); }
  const Ty& pi_shifted() const { return former(fx_.pi_shifted, "Pi(A sigma, B(sigma p, q))"); }
  const Ty& sigma_shifted() const { return former(fx_.sigma_shifted, "Sigma(A sigma, B(sigma p, q))"); }

 private:
  const Fixture& fx_;
  std::size_t cap_;
};

using RuleFn = void (*)(const Checker&, const Fixture&);

struct RuleEntry {
  RuleInfo info;
  RuleFn check;
};

Ty b_at(const Fixture& fx, const TmInCtx& u) { return ty_subst(fx.b, sub_single(fx.ga, u)); }

const std::vector<RuleEntry>& rule_table() {
  static const std::vector<RuleEntry> table = {
      {{"S1", "G |- implies 1 : G -> G"},
       [](const Checker& c, const Fixture& fx) {
         const Sub id = identity_sub(fx.g);
         c.valid(validate_pshmap(id), "1 is a context map");
         c.holds(same_presheaf(id.source, fx.g) && same_presheaf(id.target, fx.g), "1 : G -> G");
       }},
      {{"S2", "sigma : H -> G and delta : K -> H imply sigma delta : K -> G"},
       [](const Checker& c, const Fixture& fx) {
         const Sub sd = compose_subs(fx.sigma, fx.delta);
         c.valid(validate_pshmap(sd), "sigma delta is a context map");
         c.holds(same_presheaf(sd.source, fx.k) && same_presheaf(sd.target, fx.g), "sigma delta : K -> G");
       }},
      {{"S3", "G |- A and sigma : H -> G imply H |- (A)sigma"},
       [](const Checker& c, const Fixture& fx) {
         const Ty t = ty_subst(fx.a, fx.sigma);
         c.valid(validate_ty(*t), "(A)sigma is a type");
         c.holds(same_presheaf(t->ctx, fx.h), "(A)sigma lives over H");
       }},
      {{"S4", "G |- t : A and sigma : H -> G imply H |- (t)sigma : (A)sigma"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& t : c.terms(fx.a)) {
           const TmInCtx ts = tm_subst(t, fx.sigma);
           c.valid(validate_tm(ts), "(t)sigma is a term");
           c.same(ts.ty, fx.a_sigma, "(t)sigma has type (A)sigma");
         }
       }},
      {{"S5", "() |-"},
       [](const Checker& c, const Fixture& fx) {
         const Ctx e = empty_ctx(fx.base);
         c.valid(validate_presheaf(*e), "() is a context");
         for (const FinSet& s : e->sets()) c.holds(s.size == 1, "() has one environment per object");
       }},
      {{"S6", "G |- and G |- A imply G.A |-"},
       [](const Checker& c, const Fixture& fx) {
         c.valid(validate_presheaf(*ctx_extend(fx.g, fx.a)), "G.A is a context");
       }},
      {{"S7", "G |- A implies p : G.A -> G"},
       [](const Checker& c, const Fixture& fx) {
         const Ctx ga = ctx_extend(fx.g, fx.a);
         const Sub p = proj_p(ga);
         c.valid(validate_pshmap(p), "p is a context map");
         c.holds(same_presheaf(p.source, ga) && same_presheaf(p.target, fx.g), "p : G.A -> G");
       }},
      {{"S8", "G |- A implies G.A |- q : (A)p"},
       [](const Checker& c, const Fixture& fx) {
         const Ctx ga = ctx_extend(fx.g, fx.a);
         const TmInCtx q = var_q(ga);
         c.valid(validate_tm(q), "q is a term");
         c.same(q.ty, ty_subst(fx.a, proj_p(ga)), "q has type (A)p");
       }},
      {{"S9", "sigma : H -> G, G |- A and H |- u : (A)sigma imply (sigma,u) : H -> G.A"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& u : c.terms(fx.a_sigma)) {
           const Sub s = sub_pair(fx.sigma, fx.ga, u);
           c.valid(validate_pshmap(s), "(sigma,u) is a context map");
           c.holds(same_presheaf(s.source, fx.h) && same_presheaf(s.target, fx.ga), "(sigma,u) : H -> G.A");
         }
       }},
      {{"S10", "1 sigma = sigma 1 = sigma"},
       [](const Checker& c, const Fixture& fx) {
         c.same(compose_subs(identity_sub(fx.g), fx.sigma), fx.sigma, "1 sigma = sigma");
         c.same(compose_subs(fx.sigma, identity_sub(fx.h)), fx.sigma, "sigma 1 = sigma");
       }},
      {{"S11", "(sigma delta) nu = sigma (delta nu)"},
       [](const Checker& c, const Fixture& fx) {
         c.same(compose_subs(compose_subs(fx.sigma, fx.delta), fx.nu),
                compose_subs(fx.sigma, compose_subs(fx.delta, fx.nu)), "(sigma delta) nu = sigma (delta nu)");
       }},
      {{"S12", "[u] = (1,u)"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& u : c.terms(fx.a)) {
           c.same(sub_single(fx.ga, u), sub_pair(identity_sub(fx.g), fx.ga, u), "[u] = (1,u)");
         }
       }},
      {{"S13", "(A)1 = A"},
       [](const Checker& c, const Fixture& fx) {
         c.same(ty_subst(fx.a, identity_sub(fx.g)), fx.a, "(A)1 = A");
         c.same(ty_subst(fx.b, identity_sub(fx.ga)), fx.b, "(B)1 = B");
       }},
      {{"S14", "((A)sigma)delta = (A)(sigma delta)"},
       [](const Checker& c, const Fixture& fx) {
         c.same(ty_subst(fx.a_sigma, fx.delta), ty_subst(fx.a, compose_subs(fx.sigma, fx.delta)),
                "((A)sigma)delta = (A)(sigma delta)");
       }},
      {{"S15", "(u)1 = u"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& t : c.terms(fx.a)) c.same(tm_subst(t, identity_sub(fx.g)), t, "(u)1 = u");
       }},
      {{"S16", "((u)sigma)delta = (u)(sigma delta)"},
       [](const Checker& c, const Fixture& fx) {
         const Sub sd = compose_subs(fx.sigma, fx.delta);
         for (const TmInCtx& t : c.terms(fx.a)) {
           c.same(tm_subst(tm_subst(t, fx.sigma), fx.delta), tm_subst(t, sd), "((u)sigma)delta = (u)(sigma delta)");
         }
       }},
      {{"S17", "(sigma,u) delta = (sigma delta, (u)delta)"},
       [](const Checker& c, const Fixture& fx) {
         const Sub sd = compose_subs(fx.sigma, fx.delta);
         for (const TmInCtx& u : c.terms(fx.a_sigma)) {
           c.same(compose_subs(sub_pair(fx.sigma, fx.ga, u), fx.delta), sub_pair(sd, fx.ga, tm_subst(u, fx.delta)),
                  "(sigma,u) delta = (sigma delta, (u)delta)");
         }
       }},
      {{"S18", "p (sigma,u) = sigma"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& u : c.terms(fx.a_sigma)) {
           c.same(compose_subs(fx.p, sub_pair(fx.sigma, fx.ga, u)), fx.sigma, "p (sigma,u) = sigma");
         }
       }},
      {{"S19", "(q)(sigma,u) = u"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& u : c.terms(fx.a_sigma)) {
           c.same(tm_subst(fx.q, sub_pair(fx.sigma, fx.ga, u)), u, "(q)(sigma,u) = u");
         }
       }},
      {{"S20", "(p,q) = 1"},
       [](const Checker& c, const Fixture& fx) {
         c.same(sub_pair(fx.p, fx.ga, fx.q), identity_sub(fx.ga), "(p,q) = 1");
       }},

      {{"F1", "G.A |- B implies G |- Pi(A,B)"},
       [](const Checker& c, const Fixture& fx) {
         c.valid(validate_ty(*c.pi()), "Pi(A,B) is a type");
         c.holds(same_presheaf(c.pi()->ctx, fx.g), "Pi(A,B) lives over G");
       }},
      {{"F2", "G.A |- B and G.A |- b : B imply G |- (lambda b) : Pi(A,B)"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& b : c.terms(fx.b)) c.valid(validate_tm(lambda_tm(c.pi(), b)), "lambda b : Pi(A,B)");
       }},
      {{"F3", "G.A |- B implies G |- Sigma(A,B)"},
       [](const Checker& c, const Fixture& fx) {
         c.valid(validate_ty(*c.sigma()), "Sigma(A,B) is a type");
         c.holds(same_presheaf(c.sigma()->ctx, fx.g), "Sigma(A,B) lives over G");
       }},
      {{"F4", "G.A |- B, G |- u : A and G |- v : B[u] imply G |- (u,v) : Sigma(A,B)"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& u : c.terms(fx.a)) {
           for (const TmInCtx& v : c.terms(b_at(fx, u))) {
             c.valid(validate_tm(pair_tm(c.sigma(), u, v)), "(u,v) : Sigma(A,B)");
           }
         }
       }},
      {{"F5", "G |- pr : Sigma(A,B) implies G |- (pr.1) : A"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& pr : c.terms(c.sigma())) {
           const TmInCtx first = fst_tm(pr);
           c.valid(validate_tm(first), "pr.1 is a term");
           c.same(first.ty, fx.a, "pr.1 : A");
         }
       }},
      {{"F6", "G |- pr : Sigma(A,B) implies G |- (pr.2) : B[pr.1]"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& pr : c.terms(c.sigma())) {
           const TmInCtx second = snd_tm(pr);
           c.valid(validate_tm(second), "pr.2 is a term");
           c.same(second.ty, b_at(fx, fst_tm(pr)), "pr.2 : B[pr.1]");
         }
       }},
      {{"F7", "G |- f : Pi(A,B) and G |- u : A imply G |- app(f,u) : B[u]"},
       [](const Checker& c, const Fixture& fx) {
         const auto args = c.terms(fx.a);
         for (const TmInCtx& f : c.terms(c.pi())) {
           for (const TmInCtx& u : args) {
             const TmInCtx r = app_tm(f, u);
             c.valid(validate_tm(r), "app(f,u) is a term");
             c.same(r.ty, b_at(fx, u), "app(f,u) : B[u]");
           }
         }
       }},
      {{"F8", "Pi(A,B) sigma = Pi(A sigma, B (sigma p, q))"},
       [](const Checker& c, const Fixture& fx) {
         c.same(ty_subst(c.pi(), fx.sigma), c.pi_shifted(), "Pi(A,B) sigma = Pi(A sigma, B(sigma p, q))");
       }},
      {{"F9", "(lambda b)sigma = lambda(b((sigma p, q)))"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& b : c.terms(fx.b)) {
           c.same(tm_subst(lambda_tm(c.pi(), b), fx.sigma), lambda_tm(c.pi_shifted(), tm_subst(b, fx.shifted)),
                  "(lambda b)sigma = lambda(b(sigma p, q))");
         }
       }},
      {{"F10", "app(f,u)sigma = app(f sigma, u sigma)"},
       [](const Checker& c, const Fixture& fx) {
         const auto args = c.terms(fx.a);
         for (const TmInCtx& f : c.terms(c.pi())) {
           for (const TmInCtx& u : args) {
             c.same(tm_subst(app_tm(f, u), fx.sigma), app_tm(tm_subst(f, fx.sigma), tm_subst(u, fx.sigma)),
                    "app(f,u)sigma = app(f sigma, u sigma)");
           }
         }
       }},
      {{"F11", "app(lambda b, u) = b[u]"},
       [](const Checker& c, const Fixture& fx) {
         const auto args = c.terms(fx.a);
         for (const TmInCtx& b : c.terms(fx.b)) {
           const TmInCtx lam = lambda_tm(c.pi(), b);
           for (const TmInCtx& u : args) {
             c.same(app_tm(lam, u), tm_subst(b, sub_single(fx.ga, u)), "app(lambda b, u) = b[u]");
           }
         }
       }},
      {{"F12", "f = lambda(app((f)p,q))"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& f : c.terms(c.pi())) {
           c.same(lambda_tm(c.pi(), app_tm(tm_subst(f, fx.p), fx.q)), f, "lambda(app((f)p,q)) = f");
         }
       }},
      {{"F13", "Sigma(A,B) sigma = Sigma(A sigma, B (sigma p, q))"},
       [](const Checker& c, const Fixture& fx) {
         c.same(ty_subst(c.sigma(), fx.sigma), c.sigma_shifted(), "Sigma(A,B) sigma = Sigma(A sigma, B(sigma p, q))");
       }},
      {{"F14", "(pr.1)sigma = (pr sigma).1"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& pr : c.terms(c.sigma())) {
           c.same(tm_subst(fst_tm(pr), fx.sigma), fst_tm(tm_subst(pr, fx.sigma)), "(pr.1)sigma = (pr sigma).1");
         }
       }},
      {{"F15", "(pr.2)sigma = (pr sigma).2"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& pr : c.terms(c.sigma())) {
           c.same(tm_subst(snd_tm(pr), fx.sigma), snd_tm(tm_subst(pr, fx.sigma)), "(pr.2)sigma = (pr sigma).2");
         }
       }},
      {{"F16", "(u,v)sigma = (u sigma, v sigma)"},
       [](const Checker& c, const Fixture& fx) {
         const Ty shifted = ty_subst(c.sigma(), fx.sigma);
         for (const TmInCtx& u : c.terms(fx.a)) {
           for (const TmInCtx& v : c.terms(b_at(fx, u))) {
             c.same(tm_subst(pair_tm(c.sigma(), u, v), fx.sigma),
                    pair_tm(shifted, tm_subst(u, fx.sigma), tm_subst(v, fx.sigma)), "(u,v)sigma = (u sigma, v sigma)");
           }
         }
       }},
      {{"F17", "(u,v).1 = u"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& u : c.terms(fx.a)) {
           for (const TmInCtx& v : c.terms(b_at(fx, u))) c.same(fst_tm(pair_tm(c.sigma(), u, v)), u, "(u,v).1 = u");
         }
       }},
      {{"F18", "(u,v).2 = v"},
       [](const Checker& c, const Fixture& fx) {
         for (const TmInCtx& u : c.terms(fx.a)) {
           for (const TmInCtx& v : c.terms(b_at(fx, u))) c.same(snd_tm(pair_tm(c.sigma(), u, v)), v, "(u,v).2 = v");
         }
       }},
      {{"F19", "(pr.1,pr.2) = pr"},
       [](const Checker& c, const Fixture&) {
         for (const TmInCtx& pr : c.terms(c.sigma())) {
           c.same(pair_tm(c.sigma(), fst_tm(pr), snd_tm(pr)), pr, "(pr.1,pr.2) = pr");
         }
       }},
  };
  return table;
}

const RuleEntry* find_rule(std::string_view id) {
  for (const RuleEntry& e : rule_table()) {
    if (e.info.id == id) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> catalog = [] {
    std::vector<RuleInfo> out;
    for (const RuleEntry& e : rule_table()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

RuleResult check_rule(std::string_view id, const Fixture& fixture, std::size_t term_cap) {
  const RuleEntry* rule = find_rule(id);
  if (!rule) throw InputError("unknown rule \"" + std::string(id) + "\"");
  if (!fixture.rejected.empty()) {
    return {Outcome::kRejected, Json{{"fixture", fixture.name}, {"rejected", fixture.rejected}}};
  }
  try {
    rule->check(Checker(fixture, term_cap), fixture);
    return {};
  } catch (Failure& f) {
    Json detail{{"fixture", fixture.name}, {"digest", fixture.digest}};
    for (auto& [key, value] : f.detail.items()) detail[key] = std::move(value);
    return {Outcome::kFail, std::move(detail)};
  } catch (const Error& e) {
    return {Outcome::kFail, Json{{"fixture", fixture.name}, {"digest", fixture.digest}, {"error", e.what()}}};
  }
}

std::size_t SuiteReport::passed() const {
  return static_cast<std::size_t>(std::count_if(rules.begin(), rules.end(), [](const RuleReport& r) { return r.passed(); }));
}

Json SuiteReport::to_json() const {
  Json out;
  out["rules"] = Json::array();
  for (const RuleReport& r : rules) {
    out["rules"].push_back({{"id", r.id},
                            {"fixtures", r.fixtures},
                            {"failures", r.failures},
                            {"rejected", r.rejected},
                            {"first_counterexample", r.first_counterexample}});
  }
  out["total"] = rules.size();
  out["passed"] = passed();
  return out;
}

std::string SuiteReport::to_text() const {
  std::ostringstream out;
  for (const RuleReport& r : rules) {
    std::string statement;
    for (const RuleInfo& info : rule_catalog()) {
      if (info.id == r.id) statement = info.statement;
    }
    out << (r.passed() ? "pass " : "FAIL ") << r.id << "  " << statement << "  (" << r.fixtures << " fixtures";
    if (r.failures) out << ", " << r.failures << " failed";
    if (r.rejected) out << ", " << r.rejected << " rejected";
    out << ")\n";
    if (!r.first_counterexample.is_null()) out << "     first counterexample: " << r.first_counterexample.dump() << "\n";
  }
  out << passed() << "/" << rules.size() << " rules pass\n";
  return out.str();
}

SuiteReport run_suite(const SuiteConfig& config) {
  std::vector<std::string_view> ids;
  if (config.rules.empty()) {
    for (const RuleInfo& info : rule_catalog()) ids.push_back(info.id);
  } else {
    for (const std::string& id : config.rules) {
      if (!find_rule(id)) throw InputError("unknown rule \"" + id + "\"");
      ids.push_back(find_rule(id)->info.id);
    }
  }

  const auto bases = base_categories(config);
  // Per base category, per rule; merged in category order afterwards so
  // the report does not depend on scheduling.
  std::vector<std::vector<RuleReport>> partial(bases.size(), std::vector<RuleReport>(ids.size()));
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t ci; (ci = next.fetch_add(1)) < bases.size();) {
      auto& reports = partial[ci];
      if (stop) return;
      auto record = [&](std::size_t r, const RuleResult& result) {
        RuleReport& rep = reports[r];
        ++rep.fixtures;
        if (result.outcome == Outcome::kPass) return;
        (result.outcome == Outcome::kFail ? rep.failures : rep.rejected)++;
        if (rep.first_counterexample.is_null()) rep.first_counterexample = result.detail;
        if (config.fail_fast) stop = true;
      };
      try {
        gen_fixtures(config, ci, bases[ci], [&](const Fixture& fx) {
          if (stop) return;
          for (std::size_t r = 0; r < ids.size(); ++r) record(r, check_rule(ids[r], fx, config.term_cap));
        });
      } catch (const Error& e) {
        for (std::size_t r = 0; r < ids.size(); ++r) {
          record(r, {Outcome::kFail, Json{{"fixture", "C" + std::to_string(ci)}, {"error", e.what()}}});
        }
      }
    }
  };

  const unsigned threads =
      config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  SuiteReport report;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    RuleReport merged;
    merged.id = ids[r];
    for (const auto& reports : partial) {
      const RuleReport& rep = reports[r];
      merged.fixtures += rep.fixtures;
      merged.failures += rep.failures;
      merged.rejected += rep.rejected;
      if (merged.first_counterexample.is_null()) merged.first_counterexample = rep.first_counterexample;
    }
    report.rules.push_back(std::move(merged));
  }
  return report;
}

}  // namespace pcwf
