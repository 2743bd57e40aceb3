#pragma once

// Small contexts and types shared by the unit tests.

#include <vector>

#include "pcwf/cwf.hpp"
#include "pcwf/error.hpp"

namespace fixtures {

using namespace pcwf;

/// Presheaves with sets of size ≤ max_set over a few small categories,
/// up to isomorphism.
inline std::vector<Ctx> contexts(std::size_t max_set = 2) {
  std::vector<Ctx> out;
  for (const auto& c : {terminal_cat(), walking_arrow(), parallel_arrows(), chain_cat(3)})
    for (const auto& h : enumerate_presheaves(c, max_set, true, 100000)) out.push_back(h);
  return out;
}

/// Every type over h with fibres of size ≤ max_set, up to isomorphism.
/// When there are more than `limit` of them the fibre bound is lowered
/// until they fit, ending with the discrete types of size 1 and 2.
inline std::vector<Ty> types_over(const Ctx& h, std::size_t max_set, std::size_t limit = 100000) {
  auto el = op_cat(category_of_elements(*h));
  for (std::size_t n = max_set; n > 0; --n) {
    try {
      std::vector<Ty> out;
      for (const auto& p : enumerate_presheaves(el, n, true, limit)) out.push_back(ty_from_elements_presheaf(h, p));
      return out;
    } catch (const BudgetExceeded&) {
    }
  }
  return {discrete_ty(h, FinSet{1, {}}), discrete_ty(h, FinSet{2, {}})};
}

/// Offset of (ρ, u) in H.T(I) when pairs are listed lexicographically.
inline Elem pair_position(const TyInCtx& t, ObjId i, Elem rho, Elem u) {
  Elem k = 0;
  for (Elem r = 0; r < rho; ++r) k += t.size(i, r);
  return k + u;
}

}  // namespace fixtures
