#include "pcwf/cwf.hpp"

#include <algorithm>
#include <numeric>

#include "pcwf/error.hpp"
#include "pcwf/mutation.hpp"

namespace pcwf {

std::optional<Elem> PiFiber::find(const std::vector<Elem>& table) const {
  auto it = index.find(table);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> PiFiber::key_position(const PiKey& key) const {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - keys.begin());
}

namespace {

std::vector<Elem> identity_table(std::size_t n) {
  std::vector<Elem> t(n);
  std::iota(t.begin(), t.end(), 0u);
  return t;
}

std::string point(const FinCategory& c, ObjId i, Elem rho) {
  return c.object_label(i) + ":" + std::to_string(rho);
}

template <typename Fiber>
bool same_fibers(const std::vector<std::vector<std::shared_ptr<const Fiber>>>& a,
                 const std::vector<std::vector<std::shared_ptr<const Fiber>>>& b, auto&& equal) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t r = 0; r < a[i].size(); ++r) {
      if (a[i][r] != b[i][r] && !equal(*a[i][r], *b[i][r])) return false;
    }
  }
  return true;
}

}  // namespace

bool same_ty(const Ty& a, const Ty& b) {
  if (a == b) return true;
  if (!same_presheaf(a->ctx, b->ctx)) return false;
  if (a->sizes != b->sizes || a->morph != b->morph) return false;
  const bool a_sigma = a->kind == TypeKind::kSigma, b_sigma = b->kind == TypeKind::kSigma;
  const bool a_pi = a->kind == TypeKind::kPi, b_pi = b->kind == TypeKind::kPi;
  if (a_sigma != b_sigma || a_pi != b_pi) return false;
  if (a_sigma) {
    return same_fibers(a->sigma, b->sigma, [](const SigmaFiber& x, const SigmaFiber& y) { return x.pairs == y.pairs; });
  }
  if (a_pi) {
    return same_fibers(a->pi, b->pi,
                       [](const PiFiber& x, const PiFiber& y) { return x.keys == y.keys && x.tables == y.tables; });
  }
  return true;
}

bool same_tm(const TmInCtx& a, const TmInCtx& b) { return same_ty(a.ty, b.ty) && a.elem == b.elem; }

bool same_sub(const Sub& a, const Sub& b) { return same_map(a, b); }

Ctx empty_ctx(const CategoryRef& c) { return constant_presheaf(c, FinSet{1, {"()"}}); }

Sub identity_sub(const Ctx& h) { return identity_map(h); }

Sub compose_subs(const Sub& sigma, const Sub& delta) { return compose_maps(sigma, delta); }

Report validate_ty(const TyInCtx& t) {
  Report report;
  const Presheaf& h = *t.ctx;
  const FinCategory& c = *h.base();
  if (t.sizes.size() != c.object_count() || t.morph.size() != c.arrow_count()) {
    report.structural_error("type table arity", "");
    return report;
  }
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    if (t.sizes[x].size() != h.size(ObjId{x})) report.structural_error("fibre count", c.object_label(ObjId{x}));
  }
  if (!report.ok()) return report;
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    if (t.morph[fi].size() != h.size(i)) {
      report.structural_error("morphism table count", c.arrow(f).name);
      continue;
    }
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      const auto& table = t.morph[fi][rho];
      if (table.size() != t.size(i, rho)) {
        report.structural_error("morphism table arity", c.arrow(f).name + " @ " + point(c, i, rho));
        continue;
      }
      const std::uint32_t bound = t.size(j, h.restrict(f, rho));
      for (Elem u = 0; u < table.size(); ++u) {
        if (table[u] >= bound) {
          report.structural_error("morphism image out of range",
                                  c.arrow(f).name + " @ " + point(c, i, rho) + " u=" + std::to_string(u));
        }
      }
    }
  }
  if (!report.ok()) return report;

  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const ArrId id = c.id(ObjId{x});
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      for (Elem u = 0; u < t.size(ObjId{x}, rho); ++u) {
        if (t.apply(id, rho, u) != u) {
          report.law_violation("identity", point(c, ObjId{x}, rho) + " u=" + std::to_string(u),
                               std::to_string(t.apply(id, rho, u)), std::to_string(u));
        }
      }
    }
  }
  // f: J → I, g: K → J; composite comp(g, f): K → I.
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId i = c.cod(f);
    for (ArrId g : c.arrows_into(c.dom(f))) {
      const ArrId gf = c.then(g, f);
      for (Elem rho = 0; rho < h.size(i); ++rho) {
        const Elem frho = h.restrict(f, rho);
        for (Elem u = 0; u < t.size(i, rho); ++u) {
          const Elem lhs = t.apply(gf, rho, u);
          const Elem rhs = t.apply(g, frho, t.apply(f, rho, u));
          if (lhs != rhs) {
            report.law_violation("composition",
                                 c.arrow(f).name + ", " + c.arrow(g).name + " @ " + point(c, i, rho) +
                                     " u=" + std::to_string(u),
                                 std::to_string(lhs), std::to_string(rhs));
          }
        }
      }
    }
  }

  // Π fibres must only contain natural families.
  if (t.kind == TypeKind::kPi && t.former) {
    const TyInCtx& a = *t.former->dom;
    const TyInCtx& b = *t.former->cod;
    const ContextExtension& ext = extension_of(b.ctx);
    for (std::uint32_t x = 0; x < c.object_count(); ++x) {
      for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
        const PiFiber& fiber = *t.pi[x][rho];
        for (std::size_t w = 0; w < fiber.tables.size(); ++w) {
          const auto& table = fiber.tables[w];
          for (std::size_t k = 0; k < fiber.keys.size(); ++k) {
            const PiKey& key = fiber.keys[k];
            const Elem frho = h.restrict(key.arrow, rho);
            for (ArrId g : c.arrows_into(key.obj)) {
              const Elem moved = a.apply(g, frho, key.arg);
              const auto target = fiber.key_position({c.dom(g), c.then(g, key.arrow), moved});
              const Elem lhs = b.apply(g, ext.pair_index(key.obj, frho, key.arg), table[k]);
              if (!target || table[*target] != lhs) {
                report.law_violation("pi naturality",
                                     point(c, ObjId{x}, rho) + " element " + std::to_string(w) + " key " +
                                         c.arrow(key.arrow).name + "/" + std::to_string(key.arg) + " along " +
                                         c.arrow(g).name,
                                     std::to_string(lhs), target ? std::to_string(table[*target]) : "<missing>");
              }
            }
          }
        }
      }
    }
  }
  return report;
}

Report validate_tm(const TmInCtx& t) {
  Report report;
  const TyInCtx& ty = *t.ty;
  const Presheaf& h = *ty.ctx;
  const FinCategory& c = *h.base();
  if (t.elem.size() != c.object_count()) {
    report.structural_error("term table arity", "");
    return report;
  }
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    if (t.elem[x].size() != h.size(ObjId{x})) {
      report.structural_error("term table arity", c.object_label(ObjId{x}));
      continue;
    }
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      if (t.elem[x][rho] >= ty.size(ObjId{x}, rho))
        report.structural_error("term value out of range", point(c, ObjId{x}, rho));
    }
  }
  if (!report.ok()) return report;
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      const Elem lhs = ty.apply(f, rho, t(i, rho));
      const Elem rhs = t(j, h.restrict(f, rho));
      if (lhs != rhs) {
        report.law_violation("naturality", c.arrow(f).name + " @ " + point(c, i, rho), std::to_string(lhs),
                             std::to_string(rhs));
      }
    }
  }
  return report;
}

void require_shape(const TyInCtx& t, const char* op) {
  const Presheaf& h = *t.ctx;
  const FinCategory& c = *h.base();
  bool ok = t.sizes.size() == c.object_count() && t.morph.size() == c.arrow_count();
  for (std::uint32_t x = 0; ok && x < c.object_count(); ++x) ok = t.sizes[x].size() == h.size(ObjId{x});
  for (std::uint32_t fi = 0; ok && fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    ok = t.morph[fi].size() == h.size(i);
    for (Elem rho = 0; ok && rho < h.size(i); ++rho) {
      const auto& table = t.morph[fi][rho];
      const auto bound = t.size(j, h.restrict(f, rho));
      ok = table.size() == t.size(i, rho) && std::all_of(table.begin(), table.end(), [&](Elem e) { return e < bound; });
    }
  }
  if (!ok) throw StructuralError(std::string(op) + ": malformed type tables");
}

// ---------------------------------------------------------------------------

Ctx ctx_extend(const Ctx& h, const Ty& t) {
  if (!same_presheaf(h, t->ctx)) throw MismatchError("ctx_extend: type lives over a different context");
  require_shape(*t, "ctx_extend");
  const FinCategory& c = *h->base();
  auto ext = std::make_shared<ContextExtension>();
  ext->base = h;
  ext->type = t;
  std::vector<FinSet> sets;
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    std::vector<Elem> first;
    std::vector<std::pair<Elem, Elem>> pairs;
    for (Elem rho = 0; rho < h->size(ObjId{x}); ++rho) {
      first.push_back(static_cast<Elem>(pairs.size()));
      for (Elem u = 0; u < t->size(ObjId{x}, rho); ++u) pairs.emplace_back(rho, u);
    }
    sets.push_back({pairs.size(), {}});
    ext->first.push_back(std::move(first));
    ext->pairs.push_back(std::move(pairs));
  }
  std::vector<std::vector<Elem>> restrict;
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    std::vector<Elem> table;
    for (const auto& [rho, u] : ext->pairs[i.index]) {
      const Elem frho = h->restrict(f, rho);
      Elem moved = t->apply(f, rho, u);
      if (mutated(Mutation::kExtendIgnoresMorph) && u < t->size(j, frho)) moved = u;
      table.push_back(ext->pair_index(j, frho, moved));
    }
    restrict.push_back(std::move(table));
  }
  return std::make_shared<Presheaf>(h->base(), std::move(sets), std::move(restrict), std::move(ext));
}

const ContextExtension& extension_of(const Ctx& ext) {
  if (!ext->extension()) throw MismatchError("context is not a context extension");
  return *ext->extension();
}

Sub proj_p(const Ctx& ext) {
  const ContextExtension& e = extension_of(ext);
  Sub p{ext, e.base, {}};
  for (std::uint32_t x = 0; x < e.pairs.size(); ++x) {
    std::vector<Elem> comp;
    for (const auto& [rho, u] : e.pairs[x]) {
      const auto base_size = static_cast<Elem>(e.base->size(ObjId{x}));
      comp.push_back(mutated(Mutation::kProjSecond) ? u % base_size : rho);
    }
    p.components.push_back(std::move(comp));
  }
  return p;
}

Sub proj_p(const Ctx& h, const Ty& t) { return proj_p(ctx_extend(h, t)); }

TmInCtx var_q(const Ctx& ext) {
  const ContextExtension& e = extension_of(ext);
  TmInCtx q{ty_subst(e.type, proj_p(ext)), {}};
  for (const auto& pairs : e.pairs) {
    std::vector<Elem> column;
    for (const auto& [rho, u] : pairs) column.push_back(mutated(Mutation::kVarFirstElement) ? 0 : u);
    q.elem.push_back(std::move(column));
  }
  return q;
}

Ty ty_subst(const Ty& t, const Sub& sigma) {
  if (!same_presheaf(sigma.target, t->ctx)) throw MismatchError("ty_subst: substitution does not land in the type's context");
  const Presheaf& h = *sigma.source;
  const FinCategory& c = *h.base();
  auto out = std::make_shared<TyInCtx>();
  out->ctx = sigma.source;
  out->kind = t->kind;
  out->discrete = t->discrete;
  out->sizes.resize(c.object_count());
  if (t->kind == TypeKind::kSigma) out->sigma.resize(c.object_count());
  if (t->kind == TypeKind::kPi) out->pi.resize(c.object_count());
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      const Elem s = sigma(ObjId{x}, rho);
      if (s >= t->sizes[x].size()) throw StructuralError("ty_subst: context map leaves the type's context");
      out->sizes[x].push_back(t->sizes[x][s]);
      if (t->kind == TypeKind::kSigma) out->sigma[x].push_back(t->sigma[x][s]);
      if (t->kind == TypeKind::kPi) out->pi[x].push_back(t->pi[x][s]);
    }
  }
  out->morph.resize(c.arrow_count());
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ObjId i = c.cod(ArrId{fi});
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      Elem s = sigma(i, rho);
      if (mutated(Mutation::kTySubstIgnoresSub)) s = std::min<Elem>(rho, static_cast<Elem>(t->ctx->size(i) - 1));
      out->morph[fi].push_back(t->morph[fi][s]);
    }
  }
  require_shape(*out, "ty_subst");
  if (t->former) {
    out->former = Former{ty_subst(t->former->dom, sigma), ty_subst(t->former->cod, shifted_sub(sigma, t->former->cod->ctx))};
  }
  return out;
}

TmInCtx tm_subst(const TmInCtx& t, const Sub& sigma) { return tm_subst(t, sigma, ty_subst(t.ty, sigma)); }

TmInCtx tm_subst(const TmInCtx& t, const Sub& sigma, const Ty& substituted_type) {
  if (!same_presheaf(sigma.target, t.ctx())) throw MismatchError("tm_subst: substitution does not land in the term's context");
  const Presheaf& h = *sigma.source;
  TmInCtx out{substituted_type, {}};
  for (std::uint32_t x = 0; x < h.base()->object_count(); ++x) {
    std::vector<Elem> column;
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) {
      Elem s = sigma(ObjId{x}, rho);
      if (mutated(Mutation::kTmSubstIgnoresSub)) s = std::min<Elem>(rho, static_cast<Elem>(t.ctx()->size(ObjId{x}) - 1));
      if (s >= t.elem[x].size()) throw StructuralError("tm_subst: context map leaves the term's context");
      column.push_back(t(ObjId{x}, s));
    }
    out.elem.push_back(std::move(column));
  }
  return out;
}

Sub sub_pair(const Sub& sigma, const Ctx& target, const TmInCtx& u) {
  const ContextExtension& ext = extension_of(target);
  if (!same_presheaf(sigma.target, ext.base)) throw MismatchError("sub_pair: σ does not land in the base of the target");
  if (!same_presheaf(u.ctx(), sigma.source)) throw MismatchError("sub_pair: term lives over a different context");
  if (!same_ty(u.ty, ty_subst(ext.type, sigma))) throw MismatchError("sub_pair: term is not of type (A)σ");
  Sub out{sigma.source, target, {}};
  for (std::uint32_t x = 0; x < sigma.components.size(); ++x) {
    std::vector<Elem> comp;
    for (Elem rho = 0; rho < sigma.components[x].size(); ++rho) {
      const Elem s = sigma(ObjId{x}, rho);
      if (s >= ext.first[x].size() || u(ObjId{x}, rho) >= ext.type->size(ObjId{x}, s)) {
        throw StructuralError("sub_pair: component out of range");
      }
      comp.push_back(ext.pair_index(ObjId{x}, s, u(ObjId{x}, rho)));
    }
    out.components.push_back(std::move(comp));
  }
  return out;
}

Sub sub_single(const Ctx& target, const TmInCtx& u) {
  return sub_pair(identity_sub(extension_of(target).base), target, u);
}

Sub shifted_sub(const Sub& sigma, const Ctx& target) {
  const ContextExtension& ext = extension_of(target);
  const Ctx shifted = ctx_extend(sigma.source, ty_subst(ext.type, sigma));
  return sub_pair(compose_subs(sigma, proj_p(shifted)), target, var_q(shifted));
}

Ty discrete_ty(const Ctx& h, FinSet a) {
  const FinCategory& c = *h->base();
  auto out = std::make_shared<TyInCtx>();
  out->ctx = h;
  out->kind = TypeKind::kDiscrete;
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    out->sizes.emplace_back(h->size(ObjId{x}), static_cast<std::uint32_t>(a.size));
  }
  const auto identity = identity_table(a.size);
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    auto table = identity;
    if (mutated(Mutation::kDiscreteShift) && !c.is_identity(ArrId{fi})) {
      for (Elem& e : table) e = static_cast<Elem>((e + 1) % a.size);
    }
    out->morph.emplace_back(h->size(c.cod(ArrId{fi})), table);
  }
  out->discrete = std::move(a);
  return out;
}

TmInCtx discrete_tm(const Ctx& h, FinSet a, Elem value) {
  if (value >= a.size) throw StructuralError("discrete_tm: element out of range");
  TmInCtx out{discrete_ty(h, std::move(a)), {}};
  for (const FinSet& s : h->sets()) out.elem.emplace_back(s.size, value);
  return out;
}

namespace {

struct EnoughTerms {};

std::vector<TmInCtx> collect_terms(const Ty& t, const search::Limits& limits, std::size_t stop_after) {
  const Presheaf& h = *t->ctx;
  const FinCategory& c = *h.base();
  const auto offset = element_offsets(h);
  std::vector<std::uint32_t> domains;
  for (const auto& column : t->sizes) domains.insert(domains.end(), column.begin(), column.end());
  std::vector<search::Link> links;
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ArrId f{fi};
    const ObjId j = c.dom(f), i = c.cod(f);
    for (Elem rho = 0; rho < h.size(i); ++rho) {
      links.push_back({static_cast<std::uint32_t>(offset[i.index] + rho),
                       static_cast<std::uint32_t>(offset[j.index] + h.restrict(f, rho)), t->morph[fi][rho]});
    }
  }
  std::vector<TmInCtx> out;
  if (stop_after == 0) return out;
  try {
    search::solve(domains, links, limits,
                  [&](std::span<const Elem> values) {
                    TmInCtx term{t, {}};
                    for (std::uint32_t x = 0; x < c.object_count(); ++x) {
                      term.elem.emplace_back(values.begin() + offset[x], values.begin() + offset[x + 1]);
                    }
                    out.push_back(std::move(term));
                    if (out.size() == stop_after) throw EnoughTerms{};
                  },
                  "enumerate_terms");
  } catch (const EnoughTerms&) {
  }
  return out;
}

}  // namespace

std::vector<TmInCtx> enumerate_terms(const Ty& t, std::size_t cap) { return collect_terms(t, {cap, SIZE_MAX}, SIZE_MAX); }

std::vector<TmInCtx> first_terms(const Ty& t, std::size_t limit) { return collect_terms(t, {}, limit); }

Ty ty_from_elements_presheaf(const Ctx& h, const PresheafRef& p) {
  const FinCategory& c = *h->base();
  const auto offset = element_offsets(*h);
  if (p->base()->object_count() != offset.back())
    throw MismatchError("ty_from_elements_presheaf: presheaf is not over the elements of the context");
  std::vector<std::size_t> arrow_offset(c.arrow_count() + 1, 0);
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    arrow_offset[fi + 1] = arrow_offset[fi] + h->size(c.cod(ArrId{fi}));
  }
  auto out = std::make_shared<TyInCtx>();
  out->ctx = h;
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    std::vector<std::uint32_t> column;
    for (Elem rho = 0; rho < h->size(ObjId{x}); ++rho) {
      column.push_back(static_cast<std::uint32_t>(p->size(ObjId{static_cast<std::uint32_t>(offset[x] + rho)})));
    }
    out->sizes.push_back(std::move(column));
  }
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    std::vector<std::vector<Elem>> tables;
    for (Elem rho = 0; rho < h->size(c.cod(ArrId{fi})); ++rho) {
      const auto table = p->restriction(ArrId{static_cast<std::uint32_t>(arrow_offset[fi] + rho)});
      tables.emplace_back(table.begin(), table.end());
    }
    out->morph.push_back(std::move(tables));
  }
  return out;
}

Ty representable_ty(const Ctx& h, ObjId i0, Elem rho0) {
  const auto offset = element_offsets(*h);
  const CategoryRef elements = op_cat(category_of_elements(*h));
  return ty_from_elements_presheaf(h, yoneda(elements, ObjId{static_cast<std::uint32_t>(offset[i0.index] + rho0)}));
}

Ty presheaf_ty(const Ctx& h, const PresheafRef& p) {
  if (!(*h->base() == *p->base())) throw MismatchError("presheaf_ty: different base categories");
  const FinCategory& c = *h->base();
  auto out = std::make_shared<TyInCtx>();
  out->ctx = h;
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    out->sizes.emplace_back(h->size(ObjId{x}), static_cast<std::uint32_t>(p->size(ObjId{x})));
  }
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const auto table = p->restriction(ArrId{fi});
    out->morph.emplace_back(h->size(c.cod(ArrId{fi})), std::vector<Elem>(table.begin(), table.end()));
  }
  return out;
}

std::string describe_env(const Ctx& h, ObjId i, Elem rho) {
  if (const ContextExtension* ext = h->extension()) {
    const auto [base_rho, u] = ext->unpair(i, rho);
    return "(" + describe_env(ext->base, i, base_rho) + ", " + describe_elem(ext->type, i, base_rho, u) + ")";
  }
  return h->set(i).label(rho);
}

std::string describe_elem(const Ty& t, ObjId i, Elem rho, Elem u) {
  switch (t->kind) {
    case TypeKind::kDiscrete:
      return t->discrete.label(u);
    case TypeKind::kSigma:
      if (t->former) {
        const auto [a, b] = t->sigma[i.index][rho]->pairs[u];
        const ContextExtension& ext = extension_of(t->former->cod->ctx);
        return "(" + describe_elem(t->former->dom, i, rho, a) + ", " +
               describe_elem(t->former->cod, i, ext.pair_index(i, rho, a), b) + ")";
      }
      break;
    case TypeKind::kPi: {
      const PiFiber& fiber = *t->pi[i.index][rho];
      const FinCategory& c = *t->ctx->base();
      std::string out = "fun{";
      for (std::size_t k = 0; k < fiber.keys.size(); ++k) {
        if (k) out += "; ";
        out += c.arrow(fiber.keys[k].arrow).name + "," + std::to_string(fiber.keys[k].arg) + "->" +
               std::to_string(fiber.tables[u][k]);
      }
      return out + "}";
    }
    case TypeKind::kPlain:
      break;
  }
  return "#" + std::to_string(u);
}

}  // namespace pcwf
