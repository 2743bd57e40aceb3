#include "pcwf/catcore.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "pcwf/error.hpp"

namespace pcwf {

namespace {

std::string arrow_label(const FinCategory& c, ArrId f) {
  const Arrow& a = c.arrow(f);
  return a.name + ": " + c.object_label(a.dom) + "->" + c.object_label(a.cod);
}

std::string opt_label(const FinCategory& c, std::optional<ArrId> f) {
  if (!f) return "<undefined>";
  if (f->index >= c.arrow_count()) return "#" + std::to_string(f->index);
  return c.arrow(*f).name;
}

}  // namespace

FinCategory::FinCategory(std::vector<std::string> objects, std::vector<Arrow> arrows,
                         std::vector<ArrId> identities, std::vector<std::optional<ArrId>> comp)
    : objects_(std::move(objects)),
      arrows_(std::move(arrows)),
      identities_(std::move(identities)),
      comp_(std::move(comp)) {
  const std::size_t n = objects_.size();
  const std::size_t m = arrows_.size();
  if (identities_.size() != n) throw StructuralError("identity map must have one entry per object");
  if (comp_.size() != m * m) throw StructuralError("composition table must have arrow_count^2 entries");
  for (const Arrow& a : arrows_) {
    if (a.dom.index >= n || a.cod.index >= n)
      throw StructuralError("arrow '" + a.name + "' has an out-of-range endpoint");
  }
  for (ArrId i : identities_) {
    if (i.index >= m) throw StructuralError("identity designation out of range");
  }
  for (const auto& e : comp_) {
    if (e && e->index >= m) throw StructuralError("composition entry out of range");
  }

  hom_.assign(n * n, {});
  hom_pos_.assign(m, 0);
  into_.assign(n, {});
  for (std::uint32_t i = 0; i < m; ++i) {
    auto& hs = hom_[arrows_[i].dom.index * n + arrows_[i].cod.index];
    hom_pos_[i] = static_cast<std::uint32_t>(hs.size());
    hs.push_back(ArrId{i});
  }
  for (std::uint32_t y = 0; y < n; ++y) {
    for (std::uint32_t x = 0; x < n; ++x) {
      const auto& hs = hom_[x * n + y];
      into_[y].insert(into_[y].end(), hs.begin(), hs.end());
    }
  }
}

bool FinCategory::is_identity(ArrId f) const {
  return identities_[arrows_[f.index].dom.index] == f;
}

ArrId FinCategory::then(ArrId f, ArrId g) const {
  auto h = comp(f, g);
  if (!h) throw StructuralError("no composite for " + arrows_[f.index].name + " then " + arrows_[g.index].name);
  return *h;
}

std::optional<ObjId> FinCategory::find_object(const std::string& label) const {
  for (std::uint32_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i] == label) return ObjId{i};
  }
  return std::nullopt;
}

std::optional<ArrId> FinCategory::find_arrow(const std::string& name) const {
  for (std::uint32_t i = 0; i < arrows_.size(); ++i) {
    if (arrows_[i].name == name) return ArrId{i};
  }
  return std::nullopt;
}

bool operator==(const FinCategory& a, const FinCategory& b) {
  if (&a == &b) return true;
  if (a.object_count() != b.object_count() || a.arrow_count() != b.arrow_count()) return false;
  for (std::size_t i = 0; i < a.arrow_count(); ++i) {
    if (a.arrows_[i].dom != b.arrows_[i].dom || a.arrows_[i].cod != b.arrows_[i].cod) return false;
  }
  return a.identities_ == b.identities_ && a.comp_ == b.comp_;
}

Report validate_category(const FinCategory& c) {
  Report report;
  const std::size_t n = c.object_count();
  const std::size_t m = c.arrow_count();

  for (std::uint32_t x = 0; x < n; ++x) {
    const ArrId i = c.id(ObjId{x});
    if (c.dom(i).index != x || c.cod(i).index != x) {
      report.structural_error("identity designation",
                              "id(" + c.object_label(ObjId{x}) + ") = " + arrow_label(c, i));
    }
  }
  for (std::uint32_t f = 0; f < m; ++f) {
    for (std::uint32_t g = 0; g < m; ++g) {
      const bool composable = c.cod(ArrId{f}) == c.dom(ArrId{g});
      const bool present = c.comp(ArrId{f}, ArrId{g}).has_value();
      if (composable && !present) {
        report.structural_error("missing composite", c.arrow(ArrId{f}).name + " then " + c.arrow(ArrId{g}).name);
      } else if (!composable && present) {
        report.structural_error("composite for non-composable pair",
                                c.arrow(ArrId{f}).name + " then " + c.arrow(ArrId{g}).name);
      }
    }
  }
  if (!report.ok()) return report;

  for (std::uint32_t fi = 0; fi < m; ++fi) {
    const ArrId f{fi};
    for (std::uint32_t gi = 0; gi < m; ++gi) {
      const ArrId g{gi};
      if (c.cod(f) != c.dom(g)) continue;
      const ArrId h = *c.comp(f, g);
      if (c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g)) {
        report.law_violation("composite typing", c.arrow(f).name + " then " + c.arrow(g).name, arrow_label(c, h),
                             c.object_label(c.dom(f)) + "->" + c.object_label(c.cod(g)));
      }
    }
    const ArrId left = *c.comp(c.id(c.dom(f)), f);
    if (left != f) report.law_violation("left identity", c.arrow(f).name, c.arrow(left).name, c.arrow(f).name);
    const ArrId right = *c.comp(f, c.id(c.cod(f)));
    if (right != f) report.law_violation("right identity", c.arrow(f).name, c.arrow(right).name, c.arrow(f).name);
  }

  for (std::uint32_t fi = 0; fi < m; ++fi) {
    for (std::uint32_t gi = 0; gi < m; ++gi) {
      if (c.cod(ArrId{fi}) != c.dom(ArrId{gi})) continue;
      for (std::uint32_t hi = 0; hi < m; ++hi) {
        if (c.cod(ArrId{gi}) != c.dom(ArrId{hi})) continue;
        const ArrId f{fi}, g{gi}, h{hi};
        const ArrId fg = *c.comp(f, g);
        const ArrId gh = *c.comp(g, h);
        const auto lhs = c.comp(fg, h);
        const auto rhs = c.comp(f, gh);
        if (lhs != rhs) {
          report.law_violation("associativity",
                               "(" + c.arrow(f).name + ", " + c.arrow(g).name + ", " + c.arrow(h).name + ")",
                               opt_label(c, lhs), opt_label(c, rhs));
        }
      }
    }
  }
  return report;
}

namespace {

// Builds a category whose identities occupy indices 0..n-1 and are named
// id_<label>; composites involving identities are filled in automatically.
class Builder {
 public:
  explicit Builder(std::vector<std::string> objects) : objects_(std::move(objects)) {
    for (std::uint32_t x = 0; x < objects_.size(); ++x) {
      arrows_.push_back({"id_" + objects_[x], ObjId{x}, ObjId{x}});
    }
  }

  ArrId add(std::string name, std::uint32_t dom, std::uint32_t cod) {
    arrows_.push_back({std::move(name), ObjId{dom}, ObjId{cod}});
    return ArrId{static_cast<std::uint32_t>(arrows_.size() - 1)};
  }

  void set(ArrId f, ArrId g, ArrId h) { extra_[{f.index, g.index}] = h; }

  CategoryRef build() const {
    const std::size_t m = arrows_.size();
    std::vector<std::optional<ArrId>> comp(m * m);
    std::vector<ArrId> ids;
    for (std::uint32_t x = 0; x < objects_.size(); ++x) ids.push_back(ArrId{x});
    for (std::uint32_t f = 0; f < m; ++f) {
      for (std::uint32_t g = 0; g < m; ++g) {
        if (arrows_[f].cod != arrows_[g].dom) continue;
        if (f < objects_.size()) {
          comp[f * m + g] = ArrId{g};
        } else if (g < objects_.size()) {
          comp[f * m + g] = ArrId{f};
        } else if (auto it = extra_.find({f, g}); it != extra_.end()) {
          comp[f * m + g] = it->second;
        }
      }
    }
    return std::make_shared<FinCategory>(objects_, arrows_, ids, std::move(comp));
  }

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, ArrId> extra_;
};

}  // namespace

CategoryRef discrete_cat(std::size_t n) {
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < n; ++i) objects.push_back(std::to_string(i));
  return Builder(std::move(objects)).build();
}

CategoryRef terminal_cat() { return Builder({"*"}).build(); }

CategoryRef walking_arrow() {
  Builder b({"a", "b"});
  b.add("f", 0, 1);
  return b.build();
}

CategoryRef parallel_arrows() {
  Builder b({"a", "b"});
  b.add("f", 0, 1);
  b.add("g", 0, 1);
  return b.build();
}

CategoryRef chain_cat(std::size_t n) {
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < n; ++i) objects.push_back("c" + std::to_string(i));
  Builder b(objects);
  std::map<std::pair<std::size_t, std::size_t>, ArrId> arrow_of;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      arrow_of[{i, j}] = b.add(objects[i] + objects[j], static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) b.set(arrow_of[{i, j}], arrow_of[{j, k}], arrow_of[{i, k}]);
    }
  }
  return b.build();
}

CategoryRef op_cat(const CategoryRef& c) {
  if (!validate_category(*c).ok()) throw StructuralError("op_cat: input is not a valid category");
  std::vector<Arrow> arrows;
  for (const Arrow& a : c->arrows()) arrows.push_back({a.name, a.cod, a.dom});
  const std::size_t m = c->arrow_count();
  std::vector<std::optional<ArrId>> comp(m * m);
  for (std::uint32_t f = 0; f < m; ++f) {
    for (std::uint32_t g = 0; g < m; ++g) comp[f * m + g] = c->comp(ArrId{g}, ArrId{f});
  }
  return std::make_shared<FinCategory>(c->object_labels(), std::move(arrows), c->identities(), std::move(comp));
}

std::vector<std::vector<std::size_t>> hom_sizes(const FinCategory& c) {
  const std::size_t n = c.object_count();
  std::vector<std::vector<std::size_t>> out(n, std::vector<std::size_t>(n));
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = 0; y < n; ++y) out[x][y] = c.hom(ObjId{x}, ObjId{y}).size();
  }
  return out;
}

// ---------------------------------------------------------------------------

bool operator==(const Functor& a, const Functor& b) {
  return *a.source == *b.source && *a.target == *b.target && a.ob_map == b.ob_map && a.arr_map == b.arr_map;
}

Report validate_functor(const Functor& f) {
  Report report;
  const FinCategory& c = *f.source;
  const FinCategory& d = *f.target;
  if (f.ob_map.size() != c.object_count()) report.structural_error("object map arity", "");
  if (f.arr_map.size() != c.arrow_count()) report.structural_error("arrow map arity", "");
  if (!report.ok()) return report;
  for (std::size_t i = 0; i < f.ob_map.size(); ++i) {
    if (f.ob_map[i].index >= d.object_count())
      report.structural_error("object image out of range", c.object_label(ObjId{static_cast<std::uint32_t>(i)}));
  }
  for (std::size_t i = 0; i < f.arr_map.size(); ++i) {
    if (f.arr_map[i].index >= d.arrow_count())
      report.structural_error("arrow image out of range", c.arrow(ArrId{static_cast<std::uint32_t>(i)}).name);
  }
  if (!report.ok()) return report;

  bool typed = true;
  for (std::uint32_t i = 0; i < c.arrow_count(); ++i) {
    const ArrId a{i};
    const ArrId fa = f(a);
    if (d.dom(fa) != f(c.dom(a)) || d.cod(fa) != f(c.cod(a))) {
      typed = false;
      report.law_violation("arrow typing", c.arrow(a).name, arrow_label(d, fa),
                           d.object_label(f(c.dom(a))) + "->" + d.object_label(f(c.cod(a))));
    }
  }
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const ArrId lhs = f(c.id(ObjId{x}));
    const ArrId rhs = d.id(f(ObjId{x}));
    if (lhs != rhs) report.law_violation("identity preservation", c.object_label(ObjId{x}), d.arrow(lhs).name, d.arrow(rhs).name);
  }
  if (!typed) return report;
  for (std::uint32_t gi = 0; gi < c.arrow_count(); ++gi) {
    for (std::uint32_t hi = 0; hi < c.arrow_count(); ++hi) {
      const ArrId g{gi}, h{hi};
      if (c.cod(g) != c.dom(h)) continue;
      const ArrId lhs = f(c.then(g, h));
      const ArrId rhs = d.then(f(g), f(h));
      if (lhs != rhs) {
        report.law_violation("composition preservation", c.arrow(g).name + " then " + c.arrow(h).name,
                             d.arrow(lhs).name, d.arrow(rhs).name);
      }
    }
  }
  return report;
}

Functor identity_functor(const CategoryRef& c) {
  Functor f{c, c, {}, {}};
  for (std::uint32_t x = 0; x < c->object_count(); ++x) f.ob_map.push_back(ObjId{x});
  for (std::uint32_t a = 0; a < c->arrow_count(); ++a) f.arr_map.push_back(ArrId{a});
  return f;
}

Functor compose_functors(const Functor& f, const Functor& g) {
  if (!(*f.target == *g.source)) throw MismatchError("compose_functors: target of F is not the source of G");
  Functor out{f.source, g.target, {}, {}};
  for (ObjId x : f.ob_map) out.ob_map.push_back(g(x));
  for (ArrId a : f.arr_map) out.arr_map.push_back(g(a));
  return out;
}

FullFaithfulReport is_full_and_faithful(const Functor& f) {
  FullFaithfulReport out;
  out.full_and_faithful = true;
  const FinCategory& c = *f.source;
  const FinCategory& d = *f.target;
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (std::uint32_t y = 0; y < c.object_count(); ++y) {
      const auto source = c.hom(ObjId{x}, ObjId{y});
      const auto target = d.hom(f(ObjId{x}), f(ObjId{y}));
      std::set<ArrId> image;
      for (ArrId a : source) image.insert(f(a));
      HomComparison cmp{ObjId{x}, ObjId{y}, image.size() == source.size(), image.size() == target.size()};
      out.full_and_faithful = out.full_and_faithful && cmp.injective && cmp.surjective;
      out.pairs.push_back(cmp);
    }
  }
  return out;
}

std::vector<Functor> enumerate_functors(const CategoryRef& source, const CategoryRef& target, std::size_t cap) {
  const FinCategory& c = *source;
  const FinCategory& d = *target;
  const std::size_t n = c.object_count();
  const std::size_t m = c.arrow_count();
  std::vector<Functor> out;
  if (n > 0 && d.object_count() == 0) return out;

  // Composition constraints (g, h, g then h), checked once the largest of
  // the three arrow indices has been assigned.
  std::vector<std::vector<std::array<std::uint32_t, 3>>> checks(m);
  for (std::uint32_t g = 0; g < m; ++g) {
    for (std::uint32_t h = 0; h < m; ++h) {
      if (c.cod(ArrId{g}) != c.dom(ArrId{h})) continue;
      const std::uint32_t gh = c.then(ArrId{g}, ArrId{h}).index;
      checks[std::max({g, h, gh})].push_back({g, h, gh});
    }
  }

  Functor current{source, target, std::vector<ObjId>(n), std::vector<ArrId>(m)};

  std::function<void(std::uint32_t)> assign_arrow = [&](std::uint32_t k) {
    if (k == m) {
      if (out.size() == cap) throw BudgetExceeded("enumerate_functors", out.size());
      out.push_back(current);
      return;
    }
    const ArrId a{k};
    auto consistent = [&] {
      for (const auto& [g, h, gh] : checks[k]) {
        if (current.arr_map[gh] != d.then(current.arr_map[g], current.arr_map[h])) return false;
      }
      return true;
    };
    if (c.is_identity(a)) {
      current.arr_map[k] = d.id(current(c.dom(a)));
      if (consistent()) assign_arrow(k + 1);
      return;
    }
    for (ArrId candidate : d.hom(current(c.dom(a)), current(c.cod(a)))) {
      current.arr_map[k] = candidate;
      if (consistent()) assign_arrow(k + 1);
    }
  };

  std::function<void(std::uint32_t)> assign_object = [&](std::uint32_t x) {
    if (x == n) {
      assign_arrow(0);
      return;
    }
    for (std::uint32_t y = 0; y < d.object_count(); ++y) {
      current.ob_map[x] = ObjId{y};
      assign_object(x + 1);
    }
  };
  assign_object(0);
  return out;
}

// ---------------------------------------------------------------------------

bool operator==(const NatTrans& a, const NatTrans& b) {
  return a.from == b.from && a.to == b.to && a.components == b.components;
}

Report validate_nat_trans(const NatTrans& t) {
  Report report;
  if (!(*t.from.source == *t.to.source) || !(*t.from.target == *t.to.target)) {
    report.structural_error("functors have different source/target", "");
    return report;
  }
  const FinCategory& c = *t.from.source;
  const FinCategory& d = *t.from.target;
  if (t.components.size() != c.object_count()) {
    report.structural_error("component arity", "");
    return report;
  }
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const ObjId a{x};
    const ArrId comp = t[a];
    if (comp.index >= d.arrow_count()) {
      report.structural_error("component out of range", c.object_label(a));
    } else if (d.dom(comp) != t.from(a) || d.cod(comp) != t.to(a)) {
      report.structural_error("component typing", c.object_label(a) + ": " + arrow_label(d, comp));
    }
  }
  if (!report.ok()) return report;
  for (std::uint32_t gi = 0; gi < c.arrow_count(); ++gi) {
    const ArrId g{gi};
    const ArrId lhs = d.then(t[c.dom(g)], t.to(g));
    const ArrId rhs = d.then(t.from(g), t[c.cod(g)]);
    if (lhs != rhs) report.law_violation("naturality", c.arrow(g).name, d.arrow(lhs).name, d.arrow(rhs).name);
  }
  return report;
}

NatTrans identity_trans(const Functor& f) {
  NatTrans t{f, f, {}};
  for (std::uint32_t x = 0; x < f.source->object_count(); ++x) t.components.push_back(f.target->id(f(ObjId{x})));
  return t;
}

NatTrans trans_comp(const NatTrans& t1, const NatTrans& t2) {
  if (!(t1.to == t2.from)) throw MismatchError("trans_comp: codomain of t1 is not the domain of t2");
  NatTrans out{t1.from, t2.to, {}};
  for (std::uint32_t x = 0; x < t1.components.size(); ++x) {
    out.components.push_back(t1.from.target->then(t1[ObjId{x}], t2[ObjId{x}]));
  }
  return out;
}

std::vector<NatTrans> enumerate_nat_trans(const Functor& from, const Functor& to, std::size_t cap) {
  if (!(*from.source == *to.source) || !(*from.target == *to.target))
    throw MismatchError("enumerate_nat_trans: functors have different source/target");
  const FinCategory& c = *from.source;
  const FinCategory& d = *from.target;
  const std::size_t n = c.object_count();
  std::vector<std::vector<ArrId>> checks(n);
  for (std::uint32_t g = 0; g < c.arrow_count(); ++g) {
    checks[std::max(c.dom(ArrId{g}).index, c.cod(ArrId{g}).index)].push_back(ArrId{g});
  }
  std::vector<NatTrans> out;
  NatTrans current{from, to, std::vector<ArrId>(n)};
  std::function<void(std::uint32_t)> assign = [&](std::uint32_t x) {
    if (x == n) {
      if (out.size() == cap) throw BudgetExceeded("enumerate_nat_trans", out.size());
      out.push_back(current);
      return;
    }
    for (ArrId candidate : d.hom(from(ObjId{x}), to(ObjId{x}))) {
      current.components[x] = candidate;
      bool ok = true;
      for (ArrId g : checks[x]) {
        if (d.then(current[c.dom(g)], to(g)) != d.then(from(g), current[c.cod(g)])) {
          ok = false;
          break;
        }
      }
      if (ok) assign(x + 1);
    }
  };
  assign(0);
  return out;
}

CategoryRef functor_category(const CategoryRef& source, const CategoryRef& target, std::size_t cap) {
  const auto functors = enumerate_functors(source, target, cap);
  const std::size_t n = functors.size();
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < n; ++i) objects.push_back("F" + std::to_string(i));

  std::vector<Arrow> arrows;
  std::vector<NatTrans> trans;
  std::map<std::tuple<std::size_t, std::size_t, std::vector<ArrId>>, ArrId> lookup;
  std::vector<ArrId> identities(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      auto ts = enumerate_nat_trans(functors[i], functors[j], cap);
      for (std::size_t k = 0; k < ts.size(); ++k) {
        const ArrId id{static_cast<std::uint32_t>(arrows.size())};
        arrows.push_back({objects[i] + "=>" + objects[j] + "#" + std::to_string(k), ObjId{i}, ObjId{j}});
        lookup[{i, j, ts[k].components}] = id;
        if (i == j && ts[k] == identity_trans(functors[i])) identities[i] = id;
        trans.push_back(std::move(ts[k]));
      }
    }
  }
  const std::size_t m = arrows.size();
  std::vector<std::optional<ArrId>> comp(m * m);
  for (std::uint32_t a = 0; a < m; ++a) {
    for (std::uint32_t b = 0; b < m; ++b) {
      if (arrows[a].cod != arrows[b].dom) continue;
      const NatTrans composite = trans_comp(trans[a], trans[b]);
      comp[a * m + b] = lookup.at({arrows[a].dom.index, arrows[b].cod.index, composite.components});
    }
  }
  return std::make_shared<FinCategory>(std::move(objects), std::move(arrows), std::move(identities), std::move(comp));
}

// ---------------------------------------------------------------------------
// Enumeration of small categories up to isomorphism.

namespace {

struct Shape {
  std::size_t objects;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arrows;  // non-identity (dom, cod), sorted
};

// Canonical code of a category with identities at 0..n-1 and non-identity
// arrows after them sorted by (dom, cod): minimum over object permutations
// and per-hom-set permutations of the relabelled composition table.
std::vector<std::uint32_t> canonical_code(const FinCategory& c) {
  const std::size_t n = c.object_count();
  const std::size_t m = c.arrow_count();
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<std::uint32_t> best;
  do {
    // Group non-identity arrows by their permuted (dom, cod).
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> groups;
    for (std::uint32_t a = 0; a < m; ++a) {
      if (c.is_identity(ArrId{a})) continue;
      groups[{perm[c.dom(ArrId{a}).index], perm[c.cod(ArrId{a}).index]}].push_back(a);
    }
    std::vector<std::vector<std::uint32_t>*> group_list;
    for (auto& [key, g] : groups) group_list.push_back(&g);

    std::function<void(std::size_t)> permute_groups = [&](std::size_t gi) {
      if (gi == group_list.size()) {
        std::vector<std::uint32_t> new_index(m);
        for (std::uint32_t x = 0; x < n; ++x) new_index[c.id(ObjId{x}).index] = perm[x];
        std::uint32_t next = static_cast<std::uint32_t>(n);
        std::vector<std::uint32_t> code{static_cast<std::uint32_t>(n)};
        for (auto& [key, g] : groups) {
          for (std::uint32_t a : g) new_index[a] = next++;
          code.push_back(key.first);
          code.push_back(key.second);
          code.push_back(static_cast<std::uint32_t>(g.size()));
        }
        std::vector<std::uint32_t> table(m * m, static_cast<std::uint32_t>(m));
        for (std::uint32_t f = 0; f < m; ++f) {
          for (std::uint32_t g = 0; g < m; ++g) {
            if (auto h = c.comp(ArrId{f}, ArrId{g})) table[new_index[f] * m + new_index[g]] = new_index[h->index];
          }
        }
        code.insert(code.end(), table.begin(), table.end());
        if (best.empty() || code < best) best = std::move(code);
        return;
      }
      auto& g = *group_list[gi];
      std::sort(g.begin(), g.end());
      do {
        permute_groups(gi + 1);
      } while (std::next_permutation(g.begin(), g.end()));
    };
    permute_groups(0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void enumerate_tables(const Shape& shape, std::vector<CategoryRef>& out) {
  const std::size_t n = shape.objects;
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < n; ++i) objects.push_back("o" + std::to_string(i));
  std::vector<Arrow> arrows;
  for (std::uint32_t x = 0; x < n; ++x) arrows.push_back({"id_" + objects[x], ObjId{x}, ObjId{x}});
  for (std::size_t k = 0; k < shape.arrows.size(); ++k) {
    arrows.push_back({"f" + std::to_string(k), ObjId{shape.arrows[k].first}, ObjId{shape.arrows[k].second}});
  }
  const std::size_t m = arrows.size();
  std::vector<std::vector<std::uint32_t>> hom(n * n);
  for (std::uint32_t a = 0; a < m; ++a) hom[arrows[a].dom.index * n + arrows[a].cod.index].push_back(a);

  std::vector<std::uint32_t> table(m * m, UINT32_MAX);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pairs;
  for (std::uint32_t f = 0; f < m; ++f) {
    for (std::uint32_t g = 0; g < m; ++g) {
      if (arrows[f].cod != arrows[g].dom) continue;
      if (f < n) {
        table[f * m + g] = g;
      } else if (g < n) {
        table[f * m + g] = f;
      } else {
        free_pairs.emplace_back(f, g);
      }
    }
  }
  // Every triple whose composites are all known must associate.
  auto associative_so_far = [&] {
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = 0; b < m; ++b) {
        if (arrows[a].cod != arrows[b].dom) continue;
        for (std::uint32_t c = 0; c < m; ++c) {
          if (arrows[b].cod != arrows[c].dom) continue;
          const std::uint32_t ab = table[a * m + b], bc = table[b * m + c];
          if (ab == UINT32_MAX || bc == UINT32_MAX) continue;
          const std::uint32_t l = table[ab * m + c], r = table[a * m + bc];
          if (l != UINT32_MAX && r != UINT32_MAX && l != r) return false;
        }
      }
    }
    return true;
  };

  std::function<void(std::size_t)> assign = [&](std::size_t k) {
    if (k == free_pairs.size()) {
      std::vector<std::optional<ArrId>> comp(m * m);
      for (std::size_t i = 0; i < m * m; ++i) {
        if (table[i] != UINT32_MAX) comp[i] = ArrId{table[i]};
      }
      std::vector<ArrId> ids;
      for (std::uint32_t x = 0; x < n; ++x) ids.push_back(ArrId{x});
      auto c = std::make_shared<FinCategory>(objects, arrows, ids, std::move(comp));
      if (validate_category(*c).ok()) out.push_back(std::move(c));
      return;
    }
    const auto [f, g] = free_pairs[k];
    for (std::uint32_t h : hom[arrows[f].dom.index * n + arrows[g].cod.index]) {
      table[f * m + g] = h;
      if (associative_so_far()) assign(k + 1);
    }
    table[f * m + g] = UINT32_MAX;
  };
  assign(0);
}

}  // namespace

std::vector<CategoryRef> enumerate_categories(std::size_t max_objects, std::size_t max_arrows) {
  std::vector<CategoryRef> out;
  std::set<std::vector<std::uint32_t>> seen;
  for (std::size_t n = 0; n <= max_objects; ++n) {
    if (n > max_arrows) break;
    const std::size_t budget = max_arrows - n;
    // Multisets of non-identity (dom, cod) pairs of size ≤ budget.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
    for (std::uint32_t x = 0; x < n; ++x) {
      for (std::uint32_t y = 0; y < n; ++y) slots.emplace_back(x, y);
    }
    std::vector<Shape> shapes;
    std::function<void(std::size_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>&)> pick =
        [&](std::size_t from, std::vector<std::pair<std::uint32_t, std::uint32_t>>& chosen) {
          shapes.push_back({n, chosen});
          if (chosen.size() == budget) return;
          for (std::size_t s = from; s < slots.size(); ++s) {
            chosen.push_back(slots[s]);
            pick(s, chosen);
            chosen.pop_back();
          }
        };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> chosen;
    pick(0, chosen);
    std::sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) {
      return std::make_pair(a.arrows.size(), a.arrows) < std::make_pair(b.arrows.size(), b.arrows);
    });
    for (const Shape& s : shapes) {
      std::vector<CategoryRef> found;
      enumerate_tables(s, found);
      for (auto& c : found) {
        if (seen.insert(canonical_code(*c)).second) out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace pcwf
