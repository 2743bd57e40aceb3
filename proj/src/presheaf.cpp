#include "pcwf/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "pcwf/error.hpp"
#include "pcwf/mutation.hpp"

namespace pcwf {

namespace {

std::string at(const FinCategory& c, ArrId f, Elem rho) {
  return c.arrow(f).name + " @ " + c.object_label(c.cod(f)) + ":" + std::to_string(rho);
}

}  // namespace

Presheaf::Presheaf(CategoryRef base, std::vector<FinSet> sets, std::vector<std::vector<Elem>> restrict,
                   std::shared_ptr<const ContextExtension> extension)
    : base_(std::move(base)), sets_(std::move(sets)), restrict_(std::move(restrict)), extension_(std::move(extension)) {
  if (sets_.size() != base_->object_count()) throw StructuralError("presheaf needs one set per object");
  if (restrict_.size() != base_->arrow_count()) throw StructuralError("presheaf needs one restriction per arrow");
}

std::size_t Presheaf::total_size() const {
  std::size_t n = 0;
  for (const FinSet& s : sets_) n += s.size;
  return n;
}

bool operator==(const Presheaf& a, const Presheaf& b) {
  if (&a == &b) return true;
  if (!(*a.base_ == *b.base_)) return false;
  for (std::size_t i = 0; i < a.sets_.size(); ++i) {
    if (a.sets_[i].size != b.sets_[i].size) return false;
  }
  return a.restrict_ == b.restrict_;
}

bool same_presheaf(const PresheafRef& a, const PresheafRef& b) { return a == b || *a == *b; }

bool same_map(const PshMap& a, const PshMap& b) {
  return same_presheaf(a.source, b.source) && same_presheaf(a.target, b.target) && a.components == b.components;
}

Report validate_presheaf(const Presheaf& h) {
  Report report;
  const FinCategory& c = *h.base();
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const FinSet& s = h.set(ObjId{x});
    if (!s.labels.empty() && s.labels.size() != s.size)
      report.structural_error("label count", c.object_label(ObjId{x}));
  }
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const auto table = h.restriction(f);
    if (table.size() != h.size(c.cod(f))) {
      report.structural_error("restriction arity", c.arrow(f).name);
      continue;
    }
    for (Elem rho = 0; rho < table.size(); ++rho) {
      if (table[rho] >= h.size(c.dom(f))) report.structural_error("restriction image out of range", at(c, f, rho));
    }
  }
  if (!report.ok()) return report;

  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const ArrId i = c.id(ObjId{x});
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      if (h.restrict(i, rho) != rho)
        report.law_violation("identity", at(c, i, rho), std::to_string(h.restrict(i, rho)), std::to_string(rho));
    }
  }
  // For f: J → I and g: K → J, the composite is comp(g, f): K → I.
  for (std::uint32_t gi = 0; gi < c.arrow_count(); ++gi) {
    for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
      const ArrId g{gi}, f{fi};
      if (c.cod(g) != c.dom(f)) continue;
      const ArrId gf = c.then(g, f);
      for (Elem rho = 0; rho < h.size(c.cod(f)); ++rho) {
        const Elem lhs = h.restrict(gf, rho);
        const Elem rhs = h.restrict(g, h.restrict(f, rho));
        if (lhs != rhs) {
          report.law_violation("composition", c.arrow(g).name + " then " + c.arrow(f).name + " @ " +
                                                  c.object_label(c.cod(f)) + ":" + std::to_string(rho),
                               std::to_string(lhs), std::to_string(rhs));
        }
      }
    }
  }
  return report;
}

Report validate_pshmap(const PshMap& m) {
  Report report;
  if (!(*m.source->base() == *m.target->base())) {
    report.structural_error("source and target over different bases", "");
    return report;
  }
  const FinCategory& c = *m.source->base();
  if (m.components.size() != c.object_count()) {
    report.structural_error("component count", "");
    return report;
  }
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const auto& comp = m.components[x];
    if (comp.size() != m.source->size(ObjId{x})) {
      report.structural_error("component arity", c.object_label(ObjId{x}));
      continue;
    }
    for (Elem rho = 0; rho < comp.size(); ++rho) {
      if (comp[rho] >= m.target->size(ObjId{x}))
        report.structural_error("component image out of range", c.object_label(ObjId{x}) + ":" + std::to_string(rho));
    }
  }
  if (!report.ok()) return report;
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    for (Elem rho = 0; rho < m.source->size(i); ++rho) {
      const Elem lhs = m(j, m.source->restrict(f, rho));
      const Elem rhs = m.target->restrict(f, m(i, rho));
      if (lhs != rhs) report.law_violation("naturality", at(c, f, rho), std::to_string(lhs), std::to_string(rhs));
    }
  }
  return report;
}

PresheafRef constant_presheaf(const CategoryRef& c, FinSet set) {
  std::vector<FinSet> sets(c->object_count(), set);
  std::vector<Elem> identity(set.size);
  std::iota(identity.begin(), identity.end(), 0u);
  std::vector<std::vector<Elem>> restrict(c->arrow_count(), identity);
  return std::make_shared<Presheaf>(c, std::move(sets), std::move(restrict));
}

PshMap identity_map(const PresheafRef& h) {
  PshMap m{h, h, {}};
  for (const FinSet& s : h->sets()) {
    std::vector<Elem> comp(s.size);
    std::iota(comp.begin(), comp.end(), 0u);
    m.components.push_back(std::move(comp));
  }
  return m;
}

PshMap compose_maps(const PshMap& sigma, const PshMap& delta) {
  if (!same_presheaf(delta.target, sigma.source))
    throw MismatchError("compose: target of the inner map is not the source of the outer map");
  PshMap out{delta.source, sigma.target, {}};
  for (std::uint32_t x = 0; x < delta.components.size(); ++x) {
    std::vector<Elem> comp;
    comp.reserve(delta.components[x].size());
    for (Elem e : delta.components[x]) {
      if (e >= sigma.components[x].size()) throw StructuralError("compose: inner map leaves the source of the outer map");
      comp.push_back(sigma(ObjId{x}, e));
    }
    out.components.push_back(std::move(comp));
  }
  return out;
}

PresheafRef yoneda(const CategoryRef& c, ObjId x) {
  std::vector<FinSet> sets;
  for (std::uint32_t i = 0; i < c->object_count(); ++i) {
    FinSet s;
    for (ArrId a : c->hom(ObjId{i}, x)) s.labels.push_back(c->arrow(a).name);
    s.size = s.labels.size();
    sets.push_back(std::move(s));
  }
  // f: J → I sends a: I → x to f then a : J → x.
  std::vector<std::vector<Elem>> restrict;
  for (std::uint32_t fi = 0; fi < c->arrow_count(); ++fi) {
    const ArrId f{fi};
    std::vector<Elem> table;
    for (ArrId a : c->hom(c->cod(f), x)) {
      if (mutated(Mutation::kYonedaCompOrder)) {
        // a then f, when it happens to be defined.
        if (auto wrong = c->comp(a, f); wrong && c->cod(*wrong) == x && c->dom(*wrong) == c->dom(f)) {
          table.push_back(c->hom_position(*wrong));
          continue;
        }
      }
      table.push_back(c->hom_position(c->then(f, a)));
    }
    restrict.push_back(std::move(table));
  }
  return std::make_shared<Presheaf>(c, std::move(sets), std::move(restrict));
}

PshMap yoneda_map(const CategoryRef& c, ArrId f) {
  PshMap m{yoneda(c, c->dom(f)), yoneda(c, c->cod(f)), {}};
  for (std::uint32_t i = 0; i < c->object_count(); ++i) {
    std::vector<Elem> comp;
    for (ArrId g : c->hom(ObjId{i}, c->dom(f))) comp.push_back(c->hom_position(c->then(g, f)));
    m.components.push_back(std::move(comp));
  }
  return m;
}

std::vector<PshMap> enumerate_pshmaps(const PresheafRef& h, const PresheafRef& g, std::size_t cap) {
  if (!(*h->base() == *g->base())) throw MismatchError("enumerate_pshmaps: presheaves over different bases");
  const FinCategory& c = *h->base();
  std::vector<std::size_t> offset(c.object_count() + 1, 0);
  for (std::uint32_t x = 0; x < c.object_count(); ++x) offset[x + 1] = offset[x] + h->size(ObjId{x});

  std::vector<std::uint32_t> domains;
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    domains.insert(domains.end(), h->size(ObjId{x}), static_cast<std::uint32_t>(g->size(ObjId{x})));
  }
  std::vector<search::Link> links;
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    if (c.is_identity(f)) continue;
    const ObjId j = c.dom(f), i = c.cod(f);
    for (Elem rho = 0; rho < h->size(i); ++rho) {
      links.push_back({static_cast<std::uint32_t>(offset[i.index] + rho),
                       static_cast<std::uint32_t>(offset[j.index] + h->restrict(f, rho)), g->restriction(f)});
    }
  }
  std::vector<PshMap> out;
  search::solve(domains, links, {cap, SIZE_MAX},
                [&](std::span<const Elem> values) {
                  PshMap m{h, g, {}};
                  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
                    m.components.emplace_back(values.begin() + offset[x], values.begin() + offset[x + 1]);
                  }
                  out.push_back(std::move(m));
                },
                "enumerate_pshmaps");
  return out;
}

YonedaReport check_yoneda_lemma(const CategoryRef& c, std::size_t cap) {
  YonedaReport report;
  for (std::uint32_t xi = 0; xi < c->object_count(); ++xi) {
    for (std::uint32_t yi = 0; yi < c->object_count(); ++yi) {
      const ObjId x{xi}, y{yi};
      std::vector<PshMap> maps;
      try {
        maps = enumerate_pshmaps(yoneda(c, x), yoneda(c, y), cap);
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded("maps yoneda(" + c->object_label(x) + ") -> yoneda(" + c->object_label(y) + ")",
                             e.partial_count());
      }
      YonedaPair pair{x, y, c->hom(x, y).size(), maps.size(), true, false};
      std::set<std::size_t> hit;
      for (ArrId f : c->hom(x, y)) {
        const PshMap image = yoneda_map(c, f);
        auto it = std::find_if(maps.begin(), maps.end(), [&](const PshMap& m) { return same_map(m, image); });
        if (it == maps.end() || !hit.insert(static_cast<std::size_t>(it - maps.begin())).second) pair.injective = false;
      }
      pair.bijective = pair.injective && hit.size() == maps.size();
      report.ok = report.ok && pair.bijective;
      report.pairs.push_back(pair);
    }
  }
  return report;
}

std::vector<std::size_t> element_offsets(const Presheaf& h) {
  const FinCategory& c = *h.base();
  std::vector<std::size_t> offset(c.object_count() + 1, 0);
  for (std::uint32_t x = 0; x < c.object_count(); ++x) offset[x + 1] = offset[x] + h.size(ObjId{x});
  return offset;
}

CategoryRef category_of_elements(const Presheaf& h) {
  const FinCategory& c = *h.base();
  const auto offset = element_offsets(h);
  std::vector<std::string> objects;
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      objects.push_back(c.object_label(ObjId{x}) + ":" + std::to_string(rho));
    }
  }
  // Arrow (f, ρ) for f: J → I, ρ ∈ H(I), ordered by f then ρ.
  std::vector<Arrow> arrows;
  std::vector<std::size_t> arrow_offset(c.arrow_count() + 1, 0);
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      arrows.push_back({c.arrow(f).name + "@" + objects[offset[i.index] + rho],
                        ObjId{static_cast<std::uint32_t>(offset[i.index] + rho)},
                        ObjId{static_cast<std::uint32_t>(offset[j.index] + h.restrict(f, rho))}});
    }
    arrow_offset[fi + 1] = arrows.size();
  }
  std::vector<ArrId> identities(objects.size());
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      identities[offset[x] + rho] = ArrId{static_cast<std::uint32_t>(arrow_offset[c.id(ObjId{x}).index] + rho)};
    }
  }
  // (f, ρ) then (g, f(ρ)) is (comp(g, f), ρ).
  const std::size_t m = arrows.size();
  std::vector<std::optional<ArrId>> comp(m * m);
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    for (Elem rho = 0; rho < h.size(c.cod(f)); ++rho) {
      const std::size_t a = arrow_offset[fi] + rho;
      const Elem frho = h.restrict(f, rho);
      for (ArrId g : c.arrows_into(c.dom(f))) {
        const std::size_t b = arrow_offset[g.index] + frho;
        const ArrId gf = c.then(g, f);
        comp[a * m + b] = ArrId{static_cast<std::uint32_t>(arrow_offset[gf.index] + rho)};
      }
    }
  }
  return std::make_shared<FinCategory>(std::move(objects), std::move(arrows), std::move(identities), std::move(comp));
}

namespace {

// Canonical code of a presheaf under relabelling of each set.
std::vector<Elem> presheaf_code(const Presheaf& h) {
  const FinCategory& c = *h.base();
  const std::size_t n = c.object_count();
  std::vector<std::vector<Elem>> perms(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    perms[x].resize(h.size(ObjId{x}));
    std::iota(perms[x].begin(), perms[x].end(), 0u);
  }
  std::vector<Elem> best;
  std::function<void(std::size_t)> walk = [&](std::size_t x) {
    if (x == n) {
      std::vector<Elem> code;
      for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
        const ArrId f{fi};
        const auto& pi = perms[c.cod(f).index];
        const auto& pj = perms[c.dom(f).index];
        std::vector<Elem> table(pi.size());
        for (Elem rho = 0; rho < pi.size(); ++rho) table[pi[rho]] = pj[h.restrict(f, rho)];
        code.insert(code.end(), table.begin(), table.end());
      }
      if (best.empty() || code < best) best = std::move(code);
      return;
    }
    std::sort(perms[x].begin(), perms[x].end());
    do {
      walk(x + 1);
    } while (std::next_permutation(perms[x].begin(), perms[x].end()));
  };
  walk(0);
  for (std::uint32_t x = 0; x < n; ++x) best.push_back(static_cast<Elem>(h.size(ObjId{x})));
  return best;
}

}  // namespace

std::vector<PresheafRef> enumerate_presheaves(const CategoryRef& c, std::size_t max_set, bool up_to_iso,
                                              std::size_t cap) {
  const std::size_t n = c->object_count();
  const std::size_t m = c->arrow_count();
  std::vector<PresheafRef> out;
  std::set<std::vector<Elem>> seen;

  std::vector<std::size_t> sizes(n, 0);
  std::vector<std::vector<Elem>> tables(m);

  // Composition checks (g, f) with g then f, keyed by the largest index among
  // g, f and their composite.
  std::vector<std::vector<std::pair<ArrId, ArrId>>> checks(m);
  for (std::uint32_t gi = 0; gi < m; ++gi) {
    for (std::uint32_t fi = 0; fi < m; ++fi) {
      if (c->cod(ArrId{gi}) != c->dom(ArrId{fi})) continue;
      const ArrId gf = c->then(ArrId{gi}, ArrId{fi});
      checks[std::max({gi, fi, gf.index})].push_back({ArrId{gi}, ArrId{fi}});
    }
  }

  std::function<void(std::uint32_t)> assign = [&](std::uint32_t k) {
    if (k == m) {
      std::vector<FinSet> sets;
      for (std::size_t s : sizes) sets.push_back({s, {}});
      auto h = std::make_shared<Presheaf>(c, std::move(sets), tables);
      if (up_to_iso && !seen.insert(presheaf_code(*h)).second) return;
      if (out.size() == cap) throw BudgetExceeded("enumerate_presheaves", out.size());
      out.push_back(std::move(h));
      return;
    }
    const ArrId f{k};
    const std::size_t from = sizes[c->cod(f).index];
    const std::size_t to = sizes[c->dom(f).index];
    auto consistent = [&] {
      for (const auto& [g, f2] : checks[k]) {
        const ArrId gf = c->then(g, f2);
        for (Elem rho = 0; rho < sizes[c->cod(f2).index]; ++rho) {
          if (tables[gf.index][rho] != tables[g.index][tables[f2.index][rho]]) return false;
        }
      }
      return true;
    };
    if (c->is_identity(f)) {
      tables[k].resize(from);
      std::iota(tables[k].begin(), tables[k].end(), 0u);
      if (consistent()) assign(k + 1);
      return;
    }
    if (from > 0 && to == 0) return;
    tables[k].assign(from, 0);
    while (true) {
      if (consistent()) assign(k + 1);
      std::size_t pos = from;
      bool carry = true;
      while (carry && pos > 0) {
        --pos;
        if (++tables[k][pos] < to) {
          carry = false;
        } else {
          tables[k][pos] = 0;
        }
      }
      if (carry) break;
    }
  };

  std::function<void(std::size_t)> pick_sizes = [&](std::size_t x) {
    if (x == n) {
      assign(0);
      return;
    }
    for (std::size_t s = 0; s <= max_set; ++s) {
      sizes[x] = s;
      pick_sizes(x + 1);
    }
  };
  pick_sizes(0);
  return out;
}

namespace {

using FunctionKey = std::tuple<std::size_t, std::size_t, std::vector<Elem>>;

CategoryRef build_finset_category(const std::vector<std::size_t>& sizes, std::map<FunctionKey, ArrId>& lookup) {
  std::vector<std::string> objects;
  for (std::size_t s : sizes) objects.push_back("{" + std::to_string(s) + "}");
  const std::size_t n = sizes.size();
  std::vector<Arrow> arrows;
  std::vector<std::vector<Elem>> functions;
  std::vector<ArrId> identities(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = 0; y < n; ++y) {
      std::vector<Elem> table(sizes[x], 0);
      while (true) {
        if (sizes[x] == 0 || sizes[y] > 0) {
          std::string name = "[";
          for (std::size_t i = 0; i < table.size(); ++i) name += (i ? "," : "") + std::to_string(table[i]);
          name += "]:" + objects[x] + "->" + objects[y];
          const ArrId id{static_cast<std::uint32_t>(arrows.size())};
          arrows.push_back({name, ObjId{x}, ObjId{y}});
          lookup[{x, y, table}] = id;
          functions.push_back(table);
          bool is_id = x == y;
          for (std::size_t i = 0; is_id && i < table.size(); ++i) is_id = table[i] == i;
          if (is_id) identities[x] = id;
        }
        std::size_t pos = table.size();
        bool carry = true;
        while (carry && pos > 0) {
          --pos;
          if (++table[pos] < sizes[y]) {
            carry = false;
          } else {
            table[pos] = 0;
          }
        }
        if (carry) break;
      }
    }
  }
  const std::size_t m = arrows.size();
  std::vector<std::optional<ArrId>> comp(m * m);
  for (std::uint32_t a = 0; a < m; ++a) {
    for (std::uint32_t b = 0; b < m; ++b) {
      if (arrows[a].cod != arrows[b].dom) continue;
      std::vector<Elem> table;
      for (Elem e : functions[a]) table.push_back(functions[b][e]);
      comp[a * m + b] = lookup.at({arrows[a].dom.index, arrows[b].cod.index, table});
    }
  }
  return std::make_shared<FinCategory>(std::move(objects), std::move(arrows), std::move(identities), std::move(comp));
}

}  // namespace

CategoryRef finset_category(const std::vector<std::size_t>& sizes) {
  std::map<FunctionKey, ArrId> lookup;
  return build_finset_category(sizes, lookup);
}

Functor presheaf_as_functor(const PresheafRef& h) {
  const CategoryRef& c = h->base();
  std::vector<std::size_t> sizes;
  for (const FinSet& s : h->sets()) sizes.push_back(s.size);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::map<FunctionKey, ArrId> lookup;
  const CategoryRef sets = build_finset_category(sizes, lookup);
  auto object_of = [&](std::size_t size) {
    return ObjId{static_cast<std::uint32_t>(std::lower_bound(sizes.begin(), sizes.end(), size) - sizes.begin())};
  };
  Functor out{op_cat(c), sets, {}, {}};
  for (const FinSet& s : h->sets()) out.ob_map.push_back(object_of(s.size));
  for (std::uint32_t fi = 0; fi < c->arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId from = object_of(h->size(c->cod(f)));
    const ObjId to = object_of(h->size(c->dom(f)));
    const auto table = h->restriction(f);
    auto it = lookup.find({from.index, to.index, std::vector<Elem>(table.begin(), table.end())});
    if (it == lookup.end()) throw StructuralError("presheaf_as_functor: restriction table out of range");
    out.arr_map.push_back(it->second);
  }
  return out;
}

}  // namespace pcwf
