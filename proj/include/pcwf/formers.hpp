#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pcwf/cwf.hpp"

namespace pcwf {

inline constexpr std::size_t kDefaultPiCap = 100000;

/// Σ(A, B) over H, for A over H and B over H.A. Elements of Σ(I, ρ) are
/// the pairs (u, v) with v ∈ B(I, (ρ, u)), lexicographic.
Ty sigma_ty(const Ty& a, const Ty& b);
/// (u, v) at `sigma` = Σ(A, B), where v has type B[u].
TmInCtx pair_tm(const Ty& sigma, const TmInCtx& u, const TmInCtx& v);
/// pr.1 at A.
TmInCtx fst_tm(const TmInCtx& pr);
/// pr.2 at B[pr.1].
TmInCtx snd_tm(const TmInCtx& pr);

/// Canonical keys (J, f: J → I, u ∈ A(J, f(ρ))) of a Π table at (I, ρ).
std::vector<PiKey> pi_keys(const TyInCtx& a, ObjId i, Elem rho);

struct PiCheck {
  bool ok = true;
  std::string witness;
};

/// Whether `table` (one value per key of pi_keys(A, I, ρ)) is a natural
/// family: B(g)(w(J, f, u)) = w(K, comp(g, f), A(g)(u)) for all g: K → J.
PiCheck is_pi_element(const Ty& a, const Ty& b, ObjId i, Elem rho, const std::vector<Elem>& table);

/// Π(A, B) over H. Every fibre is enumerated eagerly; `cap` bounds the
/// search nodes spent per (I, ρ) and BudgetExceeded is thrown past it.
Ty pi_ty(const Ty& a, const Ty& b, std::size_t cap = kDefaultPiCap);
/// λb at the given Π(A, B), for b over H.A at B.
TmInCtx lambda_tm(const Ty& pi, const TmInCtx& b);
/// λb at a freshly built Π(A, B).
TmInCtx lambda_tm(const TmInCtx& b, std::size_t cap = kDefaultPiCap);
/// app(w, u) at B[u].
TmInCtx app_tm(const TmInCtx& w, const TmInCtx& u);

}  // namespace pcwf
