#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcwf/formers.hpp"
#include "pcwf/io.hpp"

namespace pcwf {

enum class FixtureMode { kExhaustive, kRandom };

struct SuiteConfig {
  std::size_t max_objects = 2;
  std::size_t max_arrows = 4;
  std::size_t max_set = 3;
  std::size_t pi_cap = kDefaultPiCap;
  std::uint64_t seed = 0;
  FixtureMode mode = FixtureMode::kExhaustive;
  bool include_chain = true;           // add the 3-object chain to the base categories
  std::size_t term_cap = 6;            // terms drawn per type inside one rule check
  std::size_t context_cap = 100000;    // presheaves per base category (exhaustive mode)
  std::size_t random_contexts = 8;     // accepted samples per base category (random mode)
  std::size_t random_attempts = 4000;  // raw tables drawn per base category (random mode)
  std::vector<std::string> rules;      // empty: all 39
  bool fail_fast = false;              // stop at the first failing fixture
  unsigned threads = 1;
};

/// One instance over which the rules are checked: A over G, B over G.A,
/// and a chain of context maps ν : L → K, δ : K → H, σ : H → G.
struct Fixture {
  std::string name;
  std::string digest;
  CategoryRef base;
  Ctx g;
  Ty a;
  Ctx ga;
  Ty b;
  Ctx h, k, l;
  Sub sigma, delta, nu;

  // Derived once per fixture.
  Sub p;         // G.A → G
  TmInCtx q;     // q : (A)p
  Ty a_sigma;    // (A)σ
  Sub shifted;   // (σp, q) : H.(A)σ → G.A
  Ty b_shifted;  // B(σp, q)
  std::optional<Ty> pi, sigma_ty, pi_shifted, sigma_shifted;
  std::string former_error;  // why a former could not be built

  std::string rejected;  // non-empty when a component fails its validator
};

/// Base categories of the fixture family.
std::vector<CategoryRef> base_categories(const SuiteConfig& config);

/// Streams the fixtures over one base category (index `index` in
/// base_categories) in canonical order.
void gen_fixtures(const SuiteConfig& config, std::size_t index, const CategoryRef& base,
                  const std::function<void(const Fixture&)>& visit);
/// All fixtures of the family, in canonical order.
void gen_fixtures(const SuiteConfig& config, const std::function<void(const Fixture&)>& visit);

struct RuleInfo {
  std::string_view id;
  std::string_view statement;
};

/// S1..S20 then F1..F19.
const std::vector<RuleInfo>& rule_catalog();
inline constexpr std::size_t kRuleCount = 39;

enum class Outcome { kPass, kFail, kRejected };

struct RuleResult {
  Outcome outcome = Outcome::kPass;
  Json detail;  // counterexample on failure
};

/// Checks one rule on one fixture. Typing rules build the conclusion and
/// validate it; equations build both sides and compare tables.
RuleResult check_rule(std::string_view id, const Fixture& fixture, std::size_t term_cap);

struct RuleReport {
  std::string id;
  std::size_t fixtures = 0;
  std::size_t failures = 0;
  std::size_t rejected = 0;
  Json first_counterexample;  // null when none

  bool passed() const { return failures == 0 && rejected == 0; }
};

struct SuiteReport {
  std::vector<RuleReport> rules;

  std::size_t passed() const;
  bool ok() const { return passed() == rules.size(); }
  Json to_json() const;
  std::string to_text() const;
};

SuiteReport run_suite(const SuiteConfig& config);

}  // namespace pcwf
