#include "pcwf/formers.hpp"

#include <algorithm>

#include "pcwf/error.hpp"
#include "pcwf/mutation.hpp"

namespace pcwf {
namespace {

std::string point(const FinCategory& c, ObjId i, Elem rho) {
  return c.object_label(i) + ":" + std::to_string(rho);
}

// Checks that B lives over H.A for A over H and returns the extension.
const ContextExtension& family_over(const Ty& a, const Ty& b, const char* op) {
  const ContextExtension* ext = b->ctx->extension();
  if (!ext) throw MismatchError(std::string(op) + ": family does not live over a context extension");
  if (!same_presheaf(ext->base, a->ctx) || !same_ty(ext->type, a)) {
    throw MismatchError(std::string(op) + ": family does not live over H.A");
  }
  return *ext;
}

const Former& former_of(const TmInCtx& t, TypeKind kind, const char* op) {
  if (t.ty->kind != kind || !t.ty->former) throw MismatchError(std::string(op) + ": term has the wrong type former");
  return *t.ty->former;
}

}  // namespace

Ty sigma_ty(const Ty& a, const Ty& b) {
  const ContextExtension& ext = family_over(a, b, "sigma_ty");
  require_shape(*a, "sigma_ty");
  require_shape(*b, "sigma_ty");
  const Presheaf& h = *a->ctx;
  const FinCategory& c = *h.base();
  auto out = std::make_shared<TyInCtx>();
  out->ctx = a->ctx;
  out->kind = TypeKind::kSigma;
  out->former = Former{a, b};
  out->sizes.resize(c.object_count());
  out->sigma.resize(c.object_count());
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const ObjId i{x};
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      auto fiber = std::make_shared<SigmaFiber>();
      for (Elem u = 0; u < a->size(i, rho); ++u) {
        fiber->offsets.push_back(static_cast<Elem>(fiber->pairs.size()));
        for (Elem v = 0; v < b->size(i, ext.pair_index(i, rho, u)); ++v) fiber->pairs.emplace_back(u, v);
      }
      out->sizes[x].push_back(static_cast<std::uint32_t>(fiber->pairs.size()));
      out->sigma[x].push_back(std::move(fiber));
    }
  }
  out->morph.resize(c.arrow_count());
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      const Elem frho = h.restrict(f, rho);
      const SigmaFiber& target = *out->sigma[j.index][frho];
      std::vector<Elem> table;
      for (const auto& [u, v] : out->sigma[i.index][rho]->pairs) {
        const Elem u2 = a->apply(f, rho, u);
        const Elem v2 = mutated(Mutation::kSigmaMorphDropsSecond) ? 0 : b->apply(f, ext.pair_index(i, rho, u), v);
        table.push_back(target.offsets[u2] + v2);
      }
      out->morph[fi].push_back(std::move(table));
    }
  }
  return out;
}

TmInCtx pair_tm(const Ty& sigma, const TmInCtx& u, const TmInCtx& v) {
  if (sigma->kind != TypeKind::kSigma || !sigma->former) throw MismatchError("pair_tm: not a Σ type");
  const Former& former = *sigma->former;
  if (!same_ty(u.ty, former.dom)) throw MismatchError("pair_tm: first component is not of type A");
  if (!same_ty(v.ty, ty_subst(former.cod, sub_single(former.cod->ctx, u)))) {
    throw MismatchError("pair_tm: second component is not of type B[u]");
  }
  TmInCtx out{sigma, {}};
  for (std::uint32_t x = 0; x < u.elem.size(); ++x) {
    std::vector<Elem> column;
    for (Elem rho = 0; rho < u.elem[x].size(); ++rho) {
      const SigmaFiber& fiber = *sigma->sigma[x][rho];
      const Elem a = u(ObjId{x}, rho), b = v(ObjId{x}, rho);
      if (a >= fiber.offsets.size() || fiber.offsets[a] + b >= fiber.pairs.size() || fiber.pairs[fiber.offsets[a] + b].first != a) {
        throw StructuralError("pair_tm: component out of range");
      }
      column.push_back(fiber.offsets[a] + b);
    }
    out.elem.push_back(std::move(column));
  }
  return out;
}

TmInCtx fst_tm(const TmInCtx& pr) {
  const Former& former = former_of(pr, TypeKind::kSigma, "fst_tm");
  TmInCtx out{former.dom, {}};
  for (std::uint32_t x = 0; x < pr.elem.size(); ++x) {
    std::vector<Elem> column;
    for (Elem rho = 0; rho < pr.elem[x].size(); ++rho) {
      const auto& pairs = pr.ty->sigma[x][rho]->pairs;
      if (pr(ObjId{x}, rho) >= pairs.size()) throw StructuralError("fst_tm: element out of range");
      column.push_back(pairs[pr(ObjId{x}, rho)].first);
    }
    out.elem.push_back(std::move(column));
  }
  return out;
}

TmInCtx snd_tm(const TmInCtx& pr) {
  const Former& former = former_of(pr, TypeKind::kSigma, "snd_tm");
  const TmInCtx first = fst_tm(pr);
  TmInCtx out{ty_subst(former.cod, sub_single(former.cod->ctx, first)), {}};
  for (std::uint32_t x = 0; x < pr.elem.size(); ++x) {
    std::vector<Elem> column;
    for (Elem rho = 0; rho < pr.elem[x].size(); ++rho) {
      const auto& pairs = pr.ty->sigma[x][rho]->pairs;
      if (pr(ObjId{x}, rho) >= pairs.size()) throw StructuralError("snd_tm: element out of range");
      const auto [u, v] = pairs[pr(ObjId{x}, rho)];
      const bool swap = mutated(Mutation::kSndReturnsFirst) && u < out.ty->size(ObjId{x}, rho);
      column.push_back(swap ? u : v);
    }
    out.elem.push_back(std::move(column));
  }
  return out;
}

std::vector<PiKey> pi_keys(const TyInCtx& a, ObjId i, Elem rho) {
  const Presheaf& h = *a.ctx;
  const FinCategory& c = *h.base();
  std::vector<PiKey> keys;
  for (std::uint32_t y = 0; y < c.object_count(); ++y) {
    for (ArrId f : c.hom(ObjId{y}, i)) {
      const Elem frho = h.restrict(f, rho);
      for (Elem u = 0; u < a.size(ObjId{y}, frho); ++u) keys.push_back({ObjId{y}, f, u});
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

namespace {

// value[to] == table[value[from]] for every naturality square of the
// fibre at (I, ρ); the key positions are indices into `keys`.
std::vector<search::Link> pi_links(const TyInCtx& a, const TyInCtx& b, const ContextExtension& ext, Elem rho,
                                   const std::vector<PiKey>& keys) {
  const Presheaf& h = *a.ctx;
  const FinCategory& c = *h.base();
  std::vector<search::Link> links;
  for (std::uint32_t k = 0; k < keys.size(); ++k) {
    const PiKey& key = keys[k];
    const Elem frho = h.restrict(key.arrow, rho);
    const Elem at = ext.pair_index(key.obj, frho, key.arg);
    for (ArrId g : c.arrows_into(key.obj)) {
      if (c.is_identity(g)) continue;
      const PiKey moved{c.dom(g), c.then(g, key.arrow), a.apply(g, frho, key.arg)};
      const auto pos = std::lower_bound(keys.begin(), keys.end(), moved);
      if (pos == keys.end() || *pos != moved) throw StructuralError("pi_ty: naturality square leaves the key set");
      links.push_back({k, static_cast<std::uint32_t>(pos - keys.begin()), b.morph[g.index][at]});
    }
  }
  return links;
}

std::vector<std::uint32_t> pi_domains(const TyInCtx& a, const TyInCtx& b, const ContextExtension& ext, Elem rho,
                                      const std::vector<PiKey>& keys) {
  std::vector<std::uint32_t> domains;
  for (const PiKey& key : keys) {
    domains.push_back(b.size(key.obj, ext.pair_index(key.obj, a.ctx->restrict(key.arrow, rho), key.arg)));
  }
  return domains;
}

}  // namespace

PiCheck is_pi_element(const Ty& a, const Ty& b, ObjId i, Elem rho, const std::vector<Elem>& table) {
  const ContextExtension& ext = family_over(a, b, "is_pi_element");
  require_shape(*a, "is_pi_element");
  require_shape(*b, "is_pi_element");
  const FinCategory& c = *a->ctx->base();
  const auto keys = pi_keys(*a, i, rho);
  if (table.size() != keys.size()) throw StructuralError("is_pi_element: table does not match the canonical key set");
  const auto domains = pi_domains(*a, *b, ext, rho, keys);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (table[k] >= domains[k]) {
      return {false, "value out of range at key " + c.arrow(keys[k].arrow).name + "/" + std::to_string(keys[k].arg)};
    }
  }
  for (const search::Link& link : pi_links(*a, *b, ext, rho, keys)) {
    const Elem expected = link.table[table[link.from]];
    if (table[link.to] != expected) {
      const PiKey& from = keys[link.from];
      const PiKey& to = keys[link.to];
      return {false, point(c, i, rho) + ": B-image of w(" + c.object_label(from.obj) + ", " +
                         c.arrow(from.arrow).name + ", " + std::to_string(from.arg) + ") is " +
                         std::to_string(expected) + " but w(" + c.object_label(to.obj) + ", " +
                         c.arrow(to.arrow).name + ", " + std::to_string(to.arg) + ") is " +
                         std::to_string(table[link.to])};
    }
  }
  return {};
}

Ty pi_ty(const Ty& a, const Ty& b, std::size_t cap) {
  const ContextExtension& ext = family_over(a, b, "pi_ty");
  require_shape(*a, "pi_ty");
  require_shape(*b, "pi_ty");
  const Presheaf& h = *a->ctx;
  const FinCategory& c = *h.base();
  auto out = std::make_shared<TyInCtx>();
  out->ctx = a->ctx;
  out->kind = TypeKind::kPi;
  out->former = Former{a, b};
  out->sizes.resize(c.object_count());
  out->pi.resize(c.object_count());
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const ObjId i{x};
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      auto fiber = std::make_shared<PiFiber>();
      fiber->keys = pi_keys(*a, i, rho);
      const auto domains = pi_domains(*a, *b, ext, rho, fiber->keys);
      std::vector<search::Link> links;
      if (!mutated(Mutation::kPiNoFilter)) links = pi_links(*a, *b, ext, rho, fiber->keys);
      search::solve(domains, links, {SIZE_MAX, cap},
                    [&](std::span<const Elem> values) {
                      fiber->index.emplace(std::vector<Elem>(values.begin(), values.end()),
                                           static_cast<Elem>(fiber->tables.size()));
                      fiber->tables.emplace_back(values.begin(), values.end());
                    },
                    "pi_ty at " + point(c, i, rho));
      out->sizes[x].push_back(static_cast<std::uint32_t>(fiber->tables.size()));
      out->pi[x].push_back(std::move(fiber));
    }
  }
  // Along f: J → I, w ↦ λ(K, g, v). w(K, comp(g, f), v).
  out->morph.resize(c.arrow_count());
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      const PiFiber& source = *out->pi[i.index][rho];
      const PiFiber& target = *out->pi[j.index][h.restrict(f, rho)];
      std::vector<std::size_t> positions;
      for (const PiKey& key : target.keys) {
        ArrId gf = c.then(key.arrow, f);
        if (mutated(Mutation::kPiMorphCompOrder)) {
          if (auto swapped = c.comp(f, key.arrow); swapped && source.key_position({key.obj, *swapped, key.arg})) {
            gf = *swapped;
          }
        }
        const auto position = source.key_position({key.obj, gf, key.arg});
        if (!position) throw StructuralError("pi_ty: reindexed key is missing");
        positions.push_back(*position);
      }
      std::vector<Elem> table;
      for (const auto& w : source.tables) {
        std::vector<Elem> moved;
        for (std::size_t pos : positions) moved.push_back(w[pos]);
        const auto found = target.find(moved);
        if (!found) throw StructuralError("pi_ty: reindexed family is not natural along " + c.arrow(f).name);
        table.push_back(*found);
      }
      out->morph[fi].push_back(std::move(table));
    }
  }
  return out;
}

TmInCtx lambda_tm(const Ty& pi, const TmInCtx& b) {
  if (pi->kind != TypeKind::kPi || !pi->former) throw MismatchError("lambda_tm: not a Π type");
  if (!same_ty(b.ty, pi->former->cod)) throw MismatchError("lambda_tm: body is not of type B");
  const Ty& a = pi->former->dom;
  const Presheaf& h = *a->ctx;
  const FinCategory& c = *h.base();
  const ContextExtension& ext = extension_of(b.ctx());
  TmInCtx out{pi, {}};
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    std::vector<Elem> column;
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      const PiFiber& fiber = *pi->pi[x][rho];
      std::vector<Elem> table;
      for (const PiKey& key : fiber.keys) {
        Elem env = h.restrict(key.arrow, rho);
        if (mutated(Mutation::kLambdaIgnoresRestriction)) {
          const auto wrong = static_cast<Elem>(rho % h.size(key.obj));
          if (key.arg < a->size(key.obj, wrong)) env = wrong;
        }
        const Elem at = ext.pair_index(key.obj, env, key.arg);
        if (at >= b.elem[key.obj.index].size()) throw StructuralError("lambda_tm: environment out of range");
        table.push_back(b(key.obj, at));
      }
      const auto found = fiber.find(table);
      if (!found) throw MismatchError("lambda_tm: body does not give a natural family at " + point(c, ObjId{x}, rho));
      column.push_back(*found);
    }
    out.elem.push_back(std::move(column));
  }
  return out;
}

TmInCtx lambda_tm(const TmInCtx& b, std::size_t cap) {
  return lambda_tm(pi_ty(extension_of(b.ctx()).type, b.ty, cap), b);
}

TmInCtx app_tm(const TmInCtx& w, const TmInCtx& u) {
  const Former& former = former_of(w, TypeKind::kPi, "app_tm");
  if (!same_ty(u.ty, former.dom)) throw MismatchError("app_tm: argument is not of type A");
  const Presheaf& h = *u.ctx();
  const FinCategory& c = *h.base();
  TmInCtx out{ty_subst(former.cod, sub_single(former.cod->ctx, u)), {}};
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const ObjId i{x};
    std::vector<Elem> column;
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      const PiFiber& fiber = *w.ty->pi[x][rho];
      PiKey key{i, c.id(i), u(i, rho)};
      if (mutated(Mutation::kAppNonIdentity)) {
        for (ArrId f : c.arrows_into(i)) {
          if (c.is_identity(f)) continue;
          key = {c.dom(f), f, former.dom->apply(f, rho, u(i, rho))};
          break;
        }
      }
      const auto pos = fiber.key_position(key);
      if (!pos || w(i, rho) >= fiber.tables.size()) throw StructuralError("app_tm: malformed Π element");
      Elem value = fiber.tables[w(i, rho)][*pos];
      if (const auto size = out.ty->size(i, rho); value >= size && size > 0) value %= size;
      column.push_back(value);
    }
    out.elem.push_back(std::move(column));
  }
  return out;
}

}  // namespace pcwf
