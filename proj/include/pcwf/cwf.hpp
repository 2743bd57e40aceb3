#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcwf/presheaf.hpp"
#include "pcwf/report.hpp"

namespace pcwf {

/// Contexts are presheaves over the base category; context maps are
/// natural transformations between them.
using Ctx = PresheafRef;
using Sub = PshMap;

struct TyInCtx;
using Ty = std::shared_ptr<const TyInCtx>;

/// Decoding of a Σ fibre: element k is the pair pairs[k], listed in
/// lexicographic order; offsets[u] is the index of the first pair (u, _).
struct SigmaFiber {
  std::vector<std::pair<Elem, Elem>> pairs;
  std::vector<Elem> offsets;
};

/// Key (J, f: J → I, u ∈ A(J, f(ρ))) of a dependent-function table.
struct PiKey {
  ObjId obj;
  ArrId arrow;
  Elem arg;
  friend auto operator<=>(const PiKey&, const PiKey&) = default;
};

/// The natural families at one point (I, ρ): every table is a value per
/// key, keys in canonical (object, arrow, element) order.
struct PiFiber {
  std::vector<PiKey> keys;
  std::vector<std::vector<Elem>> tables;
  std::map<std::vector<Elem>, Elem> index;

  std::optional<Elem> find(const std::vector<Elem>& table) const;
  std::optional<std::size_t> key_position(const PiKey& key) const;
};

enum class TypeKind { kPlain, kDiscrete, kSigma, kPi };

/// Domain A (over H) and family B (over H.A) of a Σ or Π type.
struct Former {
  Ty dom;
  Ty cod;
};

/// A type in context H: a finite set T(I, ρ) for each ρ ∈ H(I), and for
/// each arrow f: J → I a table T(I, ρ) → T(J, f(ρ)). Morphism tables are
/// stored for every arrow, identities included.
struct TyInCtx {
  Ctx ctx;
  TypeKind kind = TypeKind::kPlain;
  std::vector<std::vector<std::uint32_t>> sizes;       // [I][ρ]
  std::vector<std::vector<std::vector<Elem>>> morph;  // [f][ρ][u]
  std::vector<std::vector<std::shared_ptr<const SigmaFiber>>> sigma;  // kSigma only
  std::vector<std::vector<std::shared_ptr<const PiFiber>>> pi;        // kPi only
  std::optional<Former> former;
  FinSet discrete;  // kDiscrete only

  std::uint32_t size(ObjId i, Elem rho) const { return sizes[i.index][rho]; }
  /// T(I, J, f, ρ, u) for f: J → I.
  Elem apply(ArrId f, Elem rho, Elem u) const { return morph[f.index][rho][u]; }
};

/// A term of type `ty`: one element of T(I, ρ) per (I, ρ).
struct TmInCtx {
  Ty ty;
  std::vector<std::vector<Elem>> elem;  // [I][ρ]

  const Ctx& ctx() const { return ty->ctx; }
  Elem operator()(ObjId i, Elem rho) const { return elem[i.index][rho]; }
};

/// Bookkeeping attached to a context built as H.T. Elements of (H.T)(I)
/// are the pairs (ρ, u) in lexicographic order.
struct ContextExtension {
  Ctx base;
  Ty type;
  std::vector<std::vector<Elem>> first;                     // [I][ρ] index of (ρ, 0)
  std::vector<std::vector<std::pair<Elem, Elem>>> pairs;   // [I][k]

  Elem pair_index(ObjId i, Elem rho, Elem u) const { return first[i.index][rho] + u; }
  std::pair<Elem, Elem> unpair(ObjId i, Elem k) const { return pairs[i.index][k]; }
};

// Equality is extensional: set sizes, morphism tables and, for Σ and Π,
// the decoded element tables. Labels and annotations are not consulted.
bool same_ty(const Ty& a, const Ty& b);
bool same_tm(const TmInCtx& a, const TmInCtx& b);
bool same_sub(const Sub& a, const Sub& b);

Ctx empty_ctx(const CategoryRef& c);
Sub identity_sub(const Ctx& h);
/// σ δ : first δ : K → H, then σ : H → G.
Sub compose_subs(const Sub& sigma, const Sub& delta);

Report validate_ty(const TyInCtx& t);
/// Throws StructuralError naming `op` unless every morphism table of t
/// has the right arity and lands in range (the structural half of
/// validate_ty, without the functor laws).
void require_shape(const TyInCtx& t, const char* op);
Report validate_tm(const TmInCtx& t);

/// H.T
Ctx ctx_extend(const Ctx& h, const Ty& t);
/// The extension record of `ext`; throws MismatchError if it is not H.T.
const ContextExtension& extension_of(const Ctx& ext);

/// p : H.T → H, for `ext` = H.T.
Sub proj_p(const Ctx& ext);
Sub proj_p(const Ctx& h, const Ty& t);
/// q : (T)p over H.T.
TmInCtx var_q(const Ctx& ext);

/// (T)σ for σ : H → G and T over G.
Ty ty_subst(const Ty& t, const Sub& sigma);
/// (t)σ at (T)σ.
TmInCtx tm_subst(const TmInCtx& t, const Sub& sigma);
/// Same, with the already-computed (T)σ as the result type.
TmInCtx tm_subst(const TmInCtx& t, const Sub& sigma, const Ty& substituted_type);

/// (σ; u) : H → G.A for σ : H → G and u over H at (A)σ; `target` is G.A.
Sub sub_pair(const Sub& sigma, const Ctx& target, const TmInCtx& u);
/// [u] = (1; u) : H → H.A; `target` is H.A.
Sub sub_single(const Ctx& target, const TmInCtx& u);
/// (σp, q) : H.(A)σ → G.A for σ : H → G and `target` = G.A.
Sub shifted_sub(const Sub& sigma, const Ctx& target);

Ty discrete_ty(const Ctx& h, FinSet a);
TmInCtx discrete_tm(const Ctx& h, FinSet a, Elem value);

/// Every term of type t, lexicographic in the (I, ρ)-ordered element table.
std::vector<TmInCtx> enumerate_terms(const Ty& t, std::size_t cap);
/// The first `limit` terms in the same order; never throws on size.
std::vector<TmInCtx> first_terms(const Ty& t, std::size_t limit);

/// Type whose fibres and morphism maps come from a presheaf on
/// op(category_of_elements(H)).
Ty ty_from_elements_presheaf(const Ctx& h, const PresheafRef& p);
/// The representable type at the element (I0, ρ0) of H:
/// T(I, ρ) = { f : I → I0 | f(ρ0) = ρ }.
Ty representable_ty(const Ctx& h, ObjId i0, Elem rho0);
/// The closed presheaf p used as a type in any context over the same base.
Ty presheaf_ty(const Ctx& h, const PresheafRef& p);

/// Human-readable names for environments and elements.
std::string describe_env(const Ctx& h, ObjId i, Elem rho);
std::string describe_elem(const Ty& t, ObjId i, Elem rho, Elem u);

}  // namespace pcwf
