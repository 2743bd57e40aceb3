#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcwf/report.hpp"

namespace pcwf {

/// Index of an object in its owning category.
struct ObjId {
  std::uint32_t index = 0;
  friend auto operator<=>(ObjId, ObjId) = default;
};

/// Index of an arrow in its owning category.
struct ArrId {
  std::uint32_t index = 0;
  friend auto operator<=>(ArrId, ArrId) = default;
};

struct Arrow {
  std::string name;
  ObjId dom;
  ObjId cod;
};

/// An explicit finite category.
///
/// Identities are ordinary arrows designated by `id(x)`. Composition is a
/// table over all ordered pairs of arrows, written in diagrammatic order:
/// `comp(f, g)` is "f then g" and is defined exactly when cod(f) = dom(g).
/// The constructor only checks table shapes; use validate_category for the
/// category laws.
class FinCategory {
 public:
  FinCategory() = default;
  FinCategory(std::vector<std::string> objects, std::vector<Arrow> arrows,
              std::vector<ArrId> identities, std::vector<std::optional<ArrId>> comp);

  std::size_t object_count() const { return objects_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }

  const std::string& object_label(ObjId x) const { return objects_[x.index]; }
  const std::vector<std::string>& object_labels() const { return objects_; }
  const Arrow& arrow(ArrId f) const { return arrows_[f.index]; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  ObjId dom(ArrId f) const { return arrows_[f.index].dom; }
  ObjId cod(ArrId f) const { return arrows_[f.index].cod; }

  ArrId id(ObjId x) const { return identities_[x.index]; }
  bool is_identity(ArrId f) const;

  /// Raw table entry.
  std::optional<ArrId> comp(ArrId f, ArrId g) const { return comp_[f.index * arrows_.size() + g.index]; }
  /// f then g; throws StructuralError when the entry is missing.
  ArrId then(ArrId f, ArrId g) const;

  /// Arrows x → y in index order.
  std::span<const ArrId> hom(ObjId x, ObjId y) const { return hom_[x.index * objects_.size() + y.index]; }
  /// Position of f inside hom(dom f, cod f).
  std::uint32_t hom_position(ArrId f) const { return hom_pos_[f.index]; }
  /// Every arrow with codomain x, ordered by (domain index, arrow index).
  std::span<const ArrId> arrows_into(ObjId x) const { return into_[x.index]; }

  std::optional<ObjId> find_object(const std::string& label) const;
  std::optional<ArrId> find_arrow(const std::string& name) const;

  /// Table-for-table equality; labels and arrow names are ignored.
  friend bool operator==(const FinCategory& a, const FinCategory& b);

  const std::vector<ArrId>& identities() const { return identities_; }
  const std::vector<std::optional<ArrId>>& comp_table() const { return comp_; }

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<ArrId> identities_;
  std::vector<std::optional<ArrId>> comp_;

  std::vector<std::vector<ArrId>> hom_;
  std::vector<std::uint32_t> hom_pos_;
  std::vector<std::vector<ArrId>> into_;
};

using CategoryRef = std::shared_ptr<const FinCategory>;

Report validate_category(const FinCategory& c);

CategoryRef discrete_cat(std::size_t n);
CategoryRef op_cat(const CategoryRef& c);
/// Matrix of |hom(x, y)|, row x, column y.
std::vector<std::vector<std::size_t>> hom_sizes(const FinCategory& c);

// Named small categories used throughout tests, fixtures and docs.
CategoryRef terminal_cat();
CategoryRef walking_arrow();            // a, b; f: a → b
CategoryRef chain_cat(std::size_t n);   // 0 → 1 → ... → n-1 with all composites
CategoryRef parallel_arrows();          // a, b; f, g: a → b

// ---------------------------------------------------------------------------
// Functors

struct Functor {
  CategoryRef source;
  CategoryRef target;
  std::vector<ObjId> ob_map;
  std::vector<ArrId> arr_map;

  ObjId operator()(ObjId x) const { return ob_map[x.index]; }
  ArrId operator()(ArrId f) const { return arr_map[f.index]; }

  /// Same categories (structurally) and same tables.
  friend bool operator==(const Functor& a, const Functor& b);
};

Report validate_functor(const Functor& f);
Functor identity_functor(const CategoryRef& c);
/// F then G.
Functor compose_functors(const Functor& f, const Functor& g);

struct HomComparison {
  ObjId x;
  ObjId y;
  bool injective = false;
  bool surjective = false;
};

struct FullFaithfulReport {
  bool full_and_faithful = false;
  std::vector<HomComparison> pairs;
};

FullFaithfulReport is_full_and_faithful(const Functor& f);

/// All valid functors source → target, lexicographic on (ob_map, arr_map).
std::vector<Functor> enumerate_functors(const CategoryRef& source, const CategoryRef& target,
                                        std::size_t cap);

// ---------------------------------------------------------------------------
// Natural transformations

struct NatTrans {
  Functor from;
  Functor to;
  std::vector<ArrId> components;  // component at A: from(A) → to(A)

  ArrId operator[](ObjId a) const { return components[a.index]; }
  friend bool operator==(const NatTrans& a, const NatTrans& b);
};

Report validate_nat_trans(const NatTrans& t);
NatTrans identity_trans(const Functor& f);
/// Vertical composite: first t1 : F ⇒ G, then t2 : G ⇒ H.
NatTrans trans_comp(const NatTrans& t1, const NatTrans& t2);
std::vector<NatTrans> enumerate_nat_trans(const Functor& from, const Functor& to, std::size_t cap);

/// FUN(source, target): functors as objects, natural transformations as
/// arrows. Objects are labelled F0, F1, ...; arrows F<i>=>F<j>#<k>.
CategoryRef functor_category(const CategoryRef& source, const CategoryRef& target, std::size_t cap);

// ---------------------------------------------------------------------------
// Category enumeration (fixture generation)

/// Every valid category with at most `max_objects` objects and at most
/// `max_arrows` arrows (identities included), one representative per
/// isomorphism class, in a deterministic order.
std::vector<CategoryRef> enumerate_categories(std::size_t max_objects, std::size_t max_arrows);

}  // namespace pcwf
