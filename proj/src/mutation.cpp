#include "pcwf/mutation.hpp"

#include <array>
#include <atomic>
#include <utility>

namespace pcwf {

namespace {

std::atomic<Mutation> g_active{Mutation::kNone};

constexpr std::array<std::pair<Mutation, std::string_view>, 14> kNames{{
    {Mutation::kNone, "none"},
    {Mutation::kYonedaCompOrder, "yoneda-comp-order"},
    {Mutation::kProjSecond, "p-second-projection"},
    {Mutation::kVarFirstElement, "q-first-element"},
    {Mutation::kExtendIgnoresMorph, "extend-ignores-morph"},
    {Mutation::kTySubstIgnoresSub, "ty-subst-ignores-sub"},
    {Mutation::kTmSubstIgnoresSub, "tm-subst-ignores-sub"},
    {Mutation::kPiNoFilter, "pi-no-naturality-filter"},
    {Mutation::kPiMorphCompOrder, "pi-morph-comp-order"},
    {Mutation::kAppNonIdentity, "app-non-identity"},
    {Mutation::kLambdaIgnoresRestriction, "lambda-ignores-restriction"},
    {Mutation::kSigmaMorphDropsSecond, "sigma-morph-drops-second"},
    {Mutation::kSndReturnsFirst, "snd-returns-first"},
    {Mutation::kDiscreteShift, "discrete-shift"},
}};

}  // namespace

Mutation active_mutation() { return g_active.load(std::memory_order_relaxed); }
void set_mutation(Mutation m) { g_active.store(m, std::memory_order_relaxed); }

std::string_view mutation_name(Mutation m) {
  for (const auto& [value, name] : kNames) {
    if (value == m) return name;
  }
  return "unknown";
}

std::optional<Mutation> mutation_from_name(std::string_view name) {
  for (const auto& [value, n] : kNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

std::vector<Mutation> mutation_catalog() {
  std::vector<Mutation> out;
  for (const auto& [value, name] : kNames) {
    if (value != Mutation::kNone) out.push_back(value);
  }
  return out;
}

}  // namespace pcwf
