#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcwf {

/// Deliberately wrong kernel behaviours, used to show that the rule suite
/// and the validators notice broken implementations. At most one is active
/// at a time; `kNone` is the correct kernel.
enum class Mutation {
  kNone,
  kYonedaCompOrder,      // yoneda restriction composes in the wrong order
  kProjSecond,           // p returns (a truncation of) the second component
  kVarFirstElement,      // q always returns element 0
  kExtendIgnoresMorph,   // H.T restriction leaves u untouched
  kTySubstIgnoresSub,    // (T)σ morphism maps read T at ρ instead of σ(ρ)
  kTmSubstIgnoresSub,    // (t)σ reads t at ρ instead of σ(ρ)
  kPiNoFilter,           // Π sets keep non-natural tables
  kPiMorphCompOrder,     // Π morphism map reindexes by f then g
  kAppNonIdentity,       // app evaluates at the first non-identity arrow
  kLambdaIgnoresRestriction,  // λb evaluates b at ρ rather than f(ρ)
  kSigmaMorphDropsSecond,     // Σ morphism map keeps the second component
  kSndReturnsFirst,      // pr.2 reads the first component
  kDiscreteShift,        // discrete types rotate elements along non-identities
};

Mutation active_mutation();
void set_mutation(Mutation m);
inline bool mutated(Mutation m) { return active_mutation() == m; }

std::string_view mutation_name(Mutation m);
std::optional<Mutation> mutation_from_name(std::string_view name);
/// Every mutation except kNone, in declaration order.
std::vector<Mutation> mutation_catalog();

/// Activates a mutation for the lifetime of the guard.
class ScopedMutation {
 public:
  explicit ScopedMutation(Mutation m) : previous_(active_mutation()) { set_mutation(m); }
  ~ScopedMutation() { set_mutation(previous_); }
  ScopedMutation(const ScopedMutation&) = delete;
  ScopedMutation& operator=(const ScopedMutation&) = delete;

 private:
  Mutation previous_;
};

}  // namespace pcwf
