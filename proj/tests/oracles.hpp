#pragma once

// Brute-force counterparts of the library's enumerations. They read the
// raw tables directly and never call validators or search code.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "pcwf/cwf.hpp"

namespace oracle {

using pcwf::ArrId;
using pcwf::Elem;
using pcwf::ObjId;

/// Calls fn on every vector v with v[i] < radix[i], in lexicographic order.
inline void for_each_assignment(const std::vector<std::size_t>& radix,
                                const std::function<void(const std::vector<std::size_t>&)>& fn) {
  for (std::size_t r : radix)
    if (r == 0) return;
  std::vector<std::size_t> v(radix.size(), 0);
  while (true) {
    fn(v);
    std::size_t i = radix.size();
    while (i > 0) {
      --i;
      if (++v[i] < radix[i]) break;
      v[i] = 0;
      if (i == 0) return;
    }
    if (radix.empty()) return;
  }
}

inline std::size_t functor_count(const pcwf::FinCategory& c, const pcwf::FinCategory& d) {
  std::size_t count = 0;
  const std::size_t n = c.object_count(), m = c.arrow_count();
  for_each_assignment(std::vector<std::size_t>(n, d.object_count()), [&](const std::vector<std::size_t>& ob) {
    for_each_assignment(std::vector<std::size_t>(m, d.arrow_count()), [&](const std::vector<std::size_t>& ar) {
      for (std::uint32_t f = 0; f < m; ++f) {
        const auto& a = c.arrow(ArrId{f});
        const auto& b = d.arrow(ArrId{static_cast<std::uint32_t>(ar[f])});
        if (b.dom.index != ob[a.dom.index] || b.cod.index != ob[a.cod.index]) return;
      }
      for (std::uint32_t x = 0; x < n; ++x)
        if (ar[c.id(ObjId{x}).index] != d.id(ObjId{static_cast<std::uint32_t>(ob[x])}).index) return;
      for (std::uint32_t f = 0; f < m; ++f) {
        for (std::uint32_t g = 0; g < m; ++g) {
          auto fg = c.comp(ArrId{f}, ArrId{g});
          if (!fg) continue;
          auto image = d.comp(ArrId{static_cast<std::uint32_t>(ar[f])}, ArrId{static_cast<std::uint32_t>(ar[g])});
          if (!image || image->index != ar[fg->index]) return;
        }
      }
      ++count;
    });
  });
  return count;
}

/// The points (I, ρ) of a presheaf, in (I, ρ) order.
inline std::vector<std::pair<ObjId, Elem>> points(const pcwf::Presheaf& h) {
  std::vector<std::pair<ObjId, Elem>> out;
  for (std::uint32_t x = 0; x < h.base()->object_count(); ++x)
    for (Elem r = 0; r < h.size(ObjId{x}); ++r) out.push_back({ObjId{x}, r});
  return out;
}

inline std::size_t natural_map_count(const pcwf::Presheaf& h, const pcwf::Presheaf& g) {
  const auto pts = points(h);
  const auto& c = *h.base();
  std::vector<std::size_t> radix;
  for (auto [x, r] : pts) radix.push_back(g.size(x));
  std::vector<std::size_t> offset(c.object_count() + 1, 0);
  for (std::uint32_t x = 0; x < c.object_count(); ++x) offset[x + 1] = offset[x] + h.size(ObjId{x});
  std::size_t count = 0;
  if (pts.empty()) return 1;
  for_each_assignment(radix, [&](const std::vector<std::size_t>& v) {
    for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
      const auto& a = c.arrow(ArrId{f});
      for (Elem r = 0; r < h.size(a.cod); ++r) {
        Elem lhs = g.restrict(ArrId{f}, static_cast<Elem>(v[offset[a.cod.index] + r]));
        Elem rhs = static_cast<Elem>(v[offset[a.dom.index] + h.restrict(ArrId{f}, r)]);
        if (lhs != rhs) return;
      }
    }
    ++count;
  });
  return count;
}

/// Natural families of elements of T, by exhaustive filtering.
inline std::size_t term_count(const pcwf::TyInCtx& t) {
  const auto& h = *t.ctx;
  const auto& c = *h.base();
  const auto pts = points(h);
  if (pts.empty()) return 1;
  std::vector<std::size_t> radix, offset(c.object_count() + 1, 0);
  for (auto [x, r] : pts) radix.push_back(t.size(x, r));
  for (std::uint32_t x = 0; x < c.object_count(); ++x) offset[x + 1] = offset[x] + h.size(ObjId{x});
  std::size_t count = 0;
  for_each_assignment(radix, [&](const std::vector<std::size_t>& v) {
    for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
      const auto& a = c.arrow(ArrId{f});
      for (Elem r = 0; r < h.size(a.cod); ++r) {
        Elem moved = t.apply(ArrId{f}, r, static_cast<Elem>(v[offset[a.cod.index] + r]));
        if (moved != v[offset[a.dom.index] + h.restrict(ArrId{f}, r)]) return;
      }
    }
    ++count;
  });
  return count;
}

/// Connected components of the category of elements of h, by union-find
/// over the points (I, ρ) ~ (J, f(ρ)).
inline std::size_t element_components(const pcwf::Presheaf& h) {
  const auto& c = *h.base();
  const auto pts = points(h);
  std::vector<std::size_t> offset(c.object_count() + 1, 0);
  for (std::uint32_t x = 0; x < c.object_count(); ++x) offset[x + 1] = offset[x] + h.size(ObjId{x});
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
    const auto& a = c.arrow(ArrId{f});
    for (Elem r = 0; r < h.size(a.cod); ++r)
      parent[find(offset[a.cod.index] + r)] = find(offset[a.dom.index] + h.restrict(ArrId{f}, r));
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) roots += find(i) == i;
  return roots;
}

/// Dependent functions at (I, ρ): tables w(J, f, u) ∈ B(J, (f(ρ), u)) for
/// f: J → I and u ∈ A(J, f(ρ)), with B(g)(w(J, f, u)) = w(K, g then f,
/// A(g)(u)) for every g: K → J. Counted by filtering all tables.
inline std::size_t pi_element_count(const pcwf::TyInCtx& a, const pcwf::TyInCtx& b, ObjId i, Elem rho) {
  const auto& h = *a.ctx;
  const auto& c = *h.base();
  auto pos = [&](ObjId j, Elem r, Elem u) {
    Elem k = 0;
    for (Elem s = 0; s < r; ++s) k += a.size(j, s);
    return k + u;
  };
  std::vector<std::pair<std::uint32_t, Elem>> keys;  // (arrow f, u)
  std::vector<std::size_t> radix;
  for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
    const auto& arr = c.arrow(ArrId{f});
    if (arr.cod != i) continue;
    Elem fr = h.restrict(ArrId{f}, rho);
    for (Elem u = 0; u < a.size(arr.dom, fr); ++u) {
      keys.push_back({f, u});
      radix.push_back(b.size(arr.dom, pos(arr.dom, fr, u)));
    }
  }
  auto key_index = [&](std::uint32_t f, Elem u) {
    for (std::size_t k = 0; k < keys.size(); ++k)
      if (keys[k].first == f && keys[k].second == u) return k;
    return keys.size();
  };
  std::size_t count = 0;
  for_each_assignment(radix, [&](const std::vector<std::size_t>& w) {
    for (std::size_t k = 0; k < keys.size(); ++k) {
      auto [f, u] = keys[k];
      const ObjId j = c.arrow(ArrId{f}).dom;
      const Elem fr = h.restrict(ArrId{f}, rho);
      for (std::uint32_t g = 0; g < c.arrow_count(); ++g) {
        if (c.arrow(ArrId{g}).cod != j) continue;
        const Elem moved = b.apply(ArrId{g}, pos(j, fr, u), static_cast<Elem>(w[k]));
        const std::size_t other = key_index(c.comp(ArrId{g}, ArrId{f})->index, a.apply(ArrId{g}, fr, u));
        if (moved != w[other]) return;
      }
    }
    ++count;
  });
  return count;
}

/// hom(-, x) read directly off the composition table: the elements at z
/// are the arrows z → x in index order, restricted by precomposition.
inline pcwf::PresheafRef hom_presheaf(const pcwf::CategoryRef& c, ObjId x) {
  std::vector<pcwf::FinSet> sets(c->object_count());
  std::vector<std::vector<ArrId>> homs(c->object_count());
  for (std::uint32_t f = 0; f < c->arrow_count(); ++f) {
    const auto& a = c->arrow(ArrId{f});
    if (a.cod == x) homs[a.dom.index].push_back(ArrId{f});
  }
  for (std::uint32_t z = 0; z < c->object_count(); ++z) sets[z].size = homs[z].size();
  std::vector<std::vector<Elem>> restrict(c->arrow_count());
  for (std::uint32_t g = 0; g < c->arrow_count(); ++g) {
    const auto& a = c->arrow(ArrId{g});  // g: w → z acts hom(z, x) → hom(w, x)
    for (ArrId h : homs[a.cod.index]) {
      ArrId gh = *c->comp(ArrId{g}, h);
      auto& target = homs[a.dom.index];
      restrict[g].push_back(static_cast<Elem>(std::find(target.begin(), target.end(), gh) - target.begin()));
    }
  }
  return std::make_shared<pcwf::Presheaf>(c, std::move(sets), std::move(restrict));
}

}  // namespace oracle
