// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pcwf/cli.hpp"
#include "pcwf/error.hpp"
#include "pcwf/formers.hpp"
#include "pcwf/io.hpp"
#include "pcwf/mutation.hpp"
#include "pcwf/surface.hpp"

using namespace pcwf;

namespace {

const std::filesystem::path kData = PCWF_DATA_DIR;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

// Criteria 1 and 8 share the suite runs.
std::string first_suite_json;
double first_suite_seconds = 0;
int first_suite_status = -1;

Verdict rule_suite() {
  SuiteConfig config;  // ≤2 objects, ≤4 arrows, chain, sets ≤3, pi_cap 100000
  std::ostringstream out;
  auto start = std::chrono::steady_clock::now();
  first_suite_status = cli::cmd_rules(config, true, out);
  first_suite_seconds = seconds_since(start);
  first_suite_json = out.str();
  Json report = parse_json(first_suite_json);
  std::size_t failures = 0, rejected = 0, fixtures = 0;
  for (const auto& r : report["rules"]) {
    failures += r["failures"].get<std::size_t>();
    rejected += r["rejected"].get<std::size_t>();
    fixtures = std::max(fixtures, r["fixtures"].get<std::size_t>());
  }
  std::size_t structural = 0, former = 0;
  for (const auto& r : report["rules"]) {
    const std::string id = r["id"];
    if (r["failures"] == 0 && r["rejected"] == 0) (id[0] == 'S' ? structural : former) += 1;
  }
  Verdict o;
  o.pass = first_suite_status == 0 && report["total"] == 39 && report["passed"] == 39 && structural == 20 &&
           former == 19 && failures == 0 && rejected == 0 && first_suite_seconds < 120.0;
  o.detail = std::to_string(report["passed"].get<std::size_t>()) + "/39 rules (" + std::to_string(structural) +
             " structural, " + std::to_string(former) + " former), " + std::to_string(fixtures) + " fixtures, " +
             std::to_string(failures) + " failures, " + fixed(first_suite_seconds) + " s";
  return o;
}

Verdict yoneda_lemma() {
  Verdict o;
  std::size_t pairs = 0;
  for (const char* file : {"terminal.json", "discrete2.json", "walking_arrow.json", "chain3.json", "parallel_arrows.json"}) {
    std::ostringstream out;
    int status = cli::cmd_yoneda((kData / file).string(), 100000, true, out);
    Json report = parse_json(out.str());
    auto c = load_category(kData / file);
    bool ok = status == 0 && report["holds"] == true;
    for (const auto& p : report["pairs"]) {
      ObjId x = *c->find_object(p["x"]), y = *c->find_object(p["y"]);
      std::size_t brute = oracle::natural_map_count(*oracle::hom_presheaf(c, x), *oracle::hom_presheaf(c, y));
      ok = ok && p["bijective"] == true && p["maps"] == brute && p["arrows"] == c->hom(x, y).size();
      ++pairs;
    }
    if (!ok) {
      o.pass = false;
      o.detail += std::string(file) + " fails; ";
    }
  }
  o.detail += std::to_string(pairs) + " object pairs over 5 categories, counts match brute force";
  return o;
}

Verdict variable_elaboration() {
  using namespace surface;
  Verdict o;
  // The exact example.
  {
    Script s = parse_script("term t : C = z in H, x:A, y:B, z:C");
    auto binders = std::get<TermDecl>(s.decls[0]).binders;
    const std::vector<std::pair<std::string, std::string>> expected = {
        {"x", "((q)p)p"}, {"y", "(q)p"}, {"z", "q"}};
    for (std::size_t i = 0; i < 3; ++i) {
      auto c = elaborate(binders, parse_term(expected[i].first), binders[i].type);
      if (print_combinator(*c.term) != expected[i].second) {
        o.pass = false;
        o.detail += expected[i].first + " gives " + print_combinator(*c.term) + "; ";
      }
    }
  }

  struct ModelCase {
    std::string name;
    Model model;
  };
  std::vector<ModelCase> models;
  {
    auto point = empty_ctx(terminal_cat());
    models.push_back({"point", Model{point, {{"A", discrete_ty(point, FinSet{3, {}})}}, kDefaultPiCap}});
    auto yb = yoneda(walking_arrow(), ObjId{1});
    models.push_back({"yoneda(b)", Model{yb, {{"A", representable_ty(yb, ObjId{0}, 0)}}, kDefaultPiCap}});
    auto h = load_presheaf(kData / "arrow_presheaf.json");
    auto a = load_type(kData / "arrow_type.json");
    a = std::make_shared<TyInCtx>(*a);
    std::const_pointer_cast<TyInCtx>(a)->ctx = h;
    models.push_back({"arrow presheaf", Model{h, {{"A", a}}, kDefaultPiCap}});
  }
  const std::vector<std::string> palette = {"{2}", "A", "Sigma(u:{2}) {1}"};
  const std::vector<std::string> names = {"w", "x", "y", "z"};

  std::size_t contexts = 0, variables = 0, evaluations = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    oracle::for_each_assignment(std::vector<std::size_t>(n, palette.size()), [&](const std::vector<std::size_t>& pick) {
      std::vector<Binder> binders;
      for (std::size_t k = 0; k < n; ++k) binders.push_back({names[4 - n + k], parse_type(palette[pick[k]]), {}});
      ++contexts;
      for (std::size_t i = 0; i < n; ++i) {
        std::string want = "q";
        for (std::size_t d = 0; d < n - 1 - i; ++d) want = "(" + want + ")p";
        auto c = elaborate(binders, parse_term(binders[i].name), binders[i].type);
        ++variables;
        if (print_combinator(*c.term) != want) {
          o.pass = false;
          o.detail += binders[i].name + " elaborates to " + print_combinator(*c.term) + "; ";
          continue;
        }
        for (const auto& mc : models) {
          ContextChain chain = interpret_context(mc.model, binders);
          TmInCtx t = interpret_term(mc.model, chain, *c.term);
          if (!validate_tm(t).ok()) {
            o.pass = false;
            o.detail += "invalid interpretation over " + mc.name + "; ";
            continue;
          }
          // Decode every environment by hand and compare with the value.
          const Ctx& top = chain.contexts.back();
          const auto& cat = *top->base();
          for (std::uint32_t x = 0; x < cat.object_count(); ++x) {
            for (Elem rho = 0; rho < top->size(ObjId{x}); ++rho) {
              std::vector<Elem> components(n);
              Elem r = rho;
              for (std::size_t k = n; k > 0; --k) {
                const Ty& tk = extension_of(chain.contexts[k]).type;
                Elem base = 0;
                while (r >= tk->size(ObjId{x}, base)) r -= tk->size(ObjId{x}, base++);
                components[k - 1] = r;
                r = base;
              }
              ++evaluations;
              if (t(ObjId{x}, rho) != components[i]) {
                o.pass = false;
                o.detail += "wrong value over " + mc.name + "; ";
              }
            }
          }
        }
      }
    });
  }
  o.detail += std::to_string(contexts) + " contexts of length 1..4, " + std::to_string(variables) + " variables, " +
              std::to_string(evaluations) + " evaluations over 3 models";
  return o;
}

/// Type over a context on the terminal category with fibre sizes per point.
Ty set_family(const Ctx& h, const std::vector<std::uint32_t>& sizes) {
  auto t = std::make_shared<TyInCtx>();
  t->ctx = h;
  t->sizes = {sizes};
  t->morph.resize(1);
  for (auto n : sizes) {
    std::vector<Elem> id(n);
    for (Elem e = 0; e < n; ++e) id[e] = e;
    t->morph[0].push_back(id);
  }
  return t;
}

Verdict set_collapse() {
  Verdict o;
  std::size_t cases = 0;
  for (std::uint32_t points = 1; points <= 2; ++points) {
    auto g = constant_presheaf(terminal_cat(), FinSet{points, {}});
    oracle::for_each_assignment(std::vector<std::size_t>(points, 4), [&](const std::vector<std::size_t>& as) {
      auto a = set_family(g, std::vector<std::uint32_t>(as.begin(), as.end()));
      auto ga = ctx_extend(g, a);
      const std::size_t n = ga->size(ObjId{0});
      oracle::for_each_assignment(std::vector<std::size_t>(n, 4), [&](const std::vector<std::size_t>& bs) {
        auto b = set_family(ga, std::vector<std::uint32_t>(bs.begin(), bs.end()));
        auto pi = pi_ty(a, b);
        auto sigma = sigma_ty(a, b);
        std::size_t k = 0;
        for (Elem rho = 0; rho < points; ++rho) {
          std::size_t functions = 1, pairs = 0;
          for (std::size_t u = 0; u < as[rho]; ++u, ++k) {
            functions *= bs[k];
            pairs += bs[k];
          }
          if (pi->size(ObjId{0}, rho) != functions || sigma->size(ObjId{0}, rho) != pairs) {
            o.pass = false;
            o.detail = "mismatch; ";
          }
        }
        ++cases;
      });
    });
  }
  o.detail += std::to_string(cases) + " (A, B) pairs over 1- and 2-point contexts, sets of size <=3";
  return o;
}

Verdict discreteness() {
  Verdict o;
  SuiteConfig config;
  std::size_t connected = 0, checked = 0;
  for (const auto& c : base_categories(config)) {
    for (const auto& h : enumerate_presheaves(c, config.max_set, true, config.context_cap)) {
      if (oracle::element_components(*h) != 1) continue;
      ++connected;
      for (std::size_t n = 0; n <= 3; ++n) {
        ++checked;
        if (enumerate_terms(discrete_ty(h, FinSet{n, {}}), 100000).size() != n) {
          o.pass = false;
          o.detail = "count differs from |A|; ";
        }
      }
    }
  }
  o.detail += std::to_string(connected) + " connected contexts, " + std::to_string(checked) + " discrete types";
  return o;
}

Verdict beta_eta() {
  constexpr std::size_t kTermCap = 64;
  Verdict o;
  SuiteConfig config;
  std::size_t fixtures = 0, pi_terms = 0, sigma_terms = 0, failures = 0;
  auto terms = [&](const Ty& t) { return first_terms(t, kTermCap); };
  gen_fixtures(config, [&](const Fixture& fx) {
    if (!fx.rejected.empty() || !fx.pi || !fx.sigma_ty) return;
    ++fixtures;
    const Ty& pi = *fx.pi;
    const Ty& sigma = *fx.sigma_ty;
    auto us = terms(fx.a);
    for (const auto& b : terms(fx.b)) {
      auto lam = lambda_tm(pi, b);
      for (const auto& u : us) failures += !same_tm(app_tm(lam, u), tm_subst(b, sub_single(fx.ga, u)));
    }
    for (const auto& f : terms(pi)) {
      ++pi_terms;
      failures += !same_tm(f, lambda_tm(pi, app_tm(tm_subst(f, fx.p), fx.q)));
    }
    for (const auto& pr : terms(sigma)) {
      ++sigma_terms;
      failures += !same_tm(pair_tm(sigma, fst_tm(pr), snd_tm(pr)), pr);
    }
    for (const auto& u : us) {
      for (const auto& v : terms(ty_subst(fx.b, sub_single(fx.ga, u)))) {
        auto pr = pair_tm(sigma, u, v);
        failures += !same_tm(fst_tm(pr), u) || !same_tm(snd_tm(pr), v);
      }
    }
  });
  o.pass = failures == 0 && fixtures > 0;
  o.detail = std::to_string(fixtures) + " fixtures, " + std::to_string(pi_terms) + " Pi-terms, " +
             std::to_string(sigma_terms) + " Sigma-terms (at most " + std::to_string(kTermCap) +
             " per type), " + std::to_string(failures) + " failures";
  return o;
}

Verdict mutation_sensitivity() {
  Verdict o;
  auto catalog = mutation_catalog();
  std::size_t caught = 0;
  std::string missed;
  for (Mutation m : catalog) {
    SuiteConfig config;
    config.fail_fast = true;
    ScopedMutation bug(m);
    auto report = run_suite(config);
    if (!report.ok()) {
      ++caught;
    } else {
      missed += std::string(mutation_name(m)) + " ";
    }
  }
  o.pass = catalog.size() >= 10 && caught == catalog.size();
  o.detail = std::to_string(caught) + "/" + std::to_string(catalog.size()) + " seeded bugs detected";
  if (!missed.empty()) o.detail += "; missed: " + missed;
  return o;
}

Verdict determinism() {
  SuiteConfig config;
  std::ostringstream out;
  int status = cli::cmd_rules(config, true, out);
  Verdict o;
  o.pass = status == first_suite_status && out.str() == first_suite_json && !first_suite_json.empty();
  o.detail = std::to_string(first_suite_json.size()) + " bytes of JSON, " +
             (out.str() == first_suite_json ? "identical" : "different");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"rule suite 39/39 under 120 s", rule_suite},
      {"Yoneda lemma on five categories", yoneda_lemma},
      {"variable elaboration", variable_elaboration},
      {"set-collapse counts", set_collapse},
      {"discrete terms are constant", discreteness},
      {"beta/eta for Pi and Sigma", beta_eta},
      {"mutation sensitivity", mutation_sensitivity},
      {"deterministic JSON", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
