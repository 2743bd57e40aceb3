#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pcwf/catcore.hpp"
#include "pcwf/report.hpp"
#include "pcwf/search.hpp"

namespace pcwf {

/// Finite set {0, ..., size-1}; labels are optional display names.
struct FinSet {
  std::size_t size = 0;
  std::vector<std::string> labels;

  std::string label(Elem e) const { return labels.empty() ? "#" + std::to_string(e) : labels[e]; }
};

struct ContextExtension;  // cwf.hpp

/// A presheaf over a finite category: a finite set per object and, for
/// every arrow f: J → I, a restriction table H(I) → H(J).
///
/// The constructor only checks the outer arities; per-table shapes and the
/// functor laws are the business of validate_presheaf.
class Presheaf {
 public:
  Presheaf(CategoryRef base, std::vector<FinSet> sets, std::vector<std::vector<Elem>> restrict,
           std::shared_ptr<const ContextExtension> extension = nullptr);

  const CategoryRef& base() const { return base_; }
  const FinSet& set(ObjId x) const { return sets_[x.index]; }
  std::size_t size(ObjId x) const { return sets_[x.index].size; }
  const std::vector<FinSet>& sets() const { return sets_; }

  /// f(ρ) for f: J → I and ρ ∈ H(I).
  Elem restrict(ArrId f, Elem rho) const { return restrict_[f.index][rho]; }
  std::span<const Elem> restriction(ArrId f) const { return restrict_[f.index]; }
  const std::vector<std::vector<Elem>>& restrictions() const { return restrict_; }

  /// Set when this presheaf was built as a context extension H.T.
  const ContextExtension* extension() const { return extension_.get(); }
  const std::shared_ptr<const ContextExtension>& extension_ref() const { return extension_; }

  std::size_t total_size() const;

  /// Same base tables, set sizes and restriction tables. Labels are ignored.
  friend bool operator==(const Presheaf& a, const Presheaf& b);

 private:
  CategoryRef base_;
  std::vector<FinSet> sets_;
  std::vector<std::vector<Elem>> restrict_;
  std::shared_ptr<const ContextExtension> extension_;
};

using PresheafRef = std::shared_ptr<const Presheaf>;

bool same_presheaf(const PresheafRef& a, const PresheafRef& b);

/// A natural transformation between presheaves, tabulated per object.
struct PshMap {
  PresheafRef source;
  PresheafRef target;
  std::vector<std::vector<Elem>> components;

  Elem operator()(ObjId x, Elem rho) const { return components[x.index][rho]; }
};

/// Same (structural) source and target and the same component tables.
bool same_map(const PshMap& a, const PshMap& b);

Report validate_presheaf(const Presheaf& h);
Report validate_pshmap(const PshMap& m);

PresheafRef constant_presheaf(const CategoryRef& c, FinSet set);
PshMap identity_map(const PresheafRef& h);
/// σ ∘ δ: first δ : K → H, then σ : H → G.
PshMap compose_maps(const PshMap& sigma, const PshMap& delta);

/// Representable presheaf hom(-, x), elements labelled by arrow names.
PresheafRef yoneda(const CategoryRef& c, ObjId x);
/// yoneda(dom f) → yoneda(cod f), postcomposition with f.
PshMap yoneda_map(const CategoryRef& c, ArrId f);

/// All natural transformations h → g in lexicographic order of their
/// component tables.
std::vector<PshMap> enumerate_pshmaps(const PresheafRef& h, const PresheafRef& g, std::size_t cap);

struct YonedaPair {
  ObjId x;
  ObjId y;
  std::size_t arrows = 0;  // |hom(x, y)|
  std::size_t maps = 0;    // natural transformations yoneda(x) → yoneda(y)
  bool injective = false;
  bool bijective = false;
};

struct YonedaReport {
  bool ok = true;
  std::vector<YonedaPair> pairs;
};

YonedaReport check_yoneda_lemma(const CategoryRef& c, std::size_t cap);

/// Objects (I, ρ) with ρ ∈ H(I), ordered by (I, ρ). For every base arrow
/// f: J → I and ρ ∈ H(I) there is an arrow (I, ρ) → (J, f(ρ)).
CategoryRef category_of_elements(const Presheaf& h);
/// Object index of (I, ρ) in category_of_elements(h).
std::vector<std::size_t> element_offsets(const Presheaf& h);

/// Every valid presheaf with all sets of size ≤ max_set, ordered by the
/// size vector and then by restriction tables. With `up_to_iso`, one
/// representative per isomorphism class is kept.
std::vector<PresheafRef> enumerate_presheaves(const CategoryRef& c, std::size_t max_set, bool up_to_iso,
                                              std::size_t cap);

/// The category whose objects are the given finite set sizes and whose
/// arrows are all functions between them (arrow names list the table).
CategoryRef finset_category(const std::vector<std::size_t>& sizes);

/// H viewed as a functor op(C) → finset_category(distinct sizes of H).
Functor presheaf_as_functor(const PresheafRef& h);

}  // namespace pcwf
