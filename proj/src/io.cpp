#include "pcwf/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pcwf/error.hpp"

namespace pcwf {
namespace fs = std::filesystem;

namespace {

std::pair<std::size_t, std::size_t> position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

const Json& object_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_object()) throw InputError(where + ": field \"" + key + "\" must be an object");
  return v;
}

std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

Elem index_of(const Json& j, std::size_t bound, const std::string& where) {
  if (!j.is_number_unsigned()) throw InputError(where + ": expected a non-negative integer");
  const auto v = j.get<std::uint64_t>();
  if (v >= bound) throw InputError(where + ": index " + std::to_string(v) + " out of range (size " + std::to_string(bound) + ")");
  return static_cast<Elem>(v);
}

// Inline object, or path relative to `dir`. Returns the document and the
// directory its own references resolve against.
std::pair<Json, fs::path> resolve(const Json& ref, const fs::path& dir, const std::string& where) {
  if (ref.is_object()) return {ref, dir};
  if (ref.is_string()) {
    const fs::path path = dir / ref.get<std::string>();
    return {read_json(path), path.parent_path()};
  }
  throw InputError(where + ": expected an inline object or a file path");
}

FinSet finset_of(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return {j.get<std::size_t>(), {}};
  if (j.is_array()) {
    FinSet s{j.size(), {}};
    for (const Json& label : j) s.labels.push_back(string_of(label, where));
    return s;
  }
  throw InputError(where + ": expected a size or a list of labels");
}

// "I:rho" → (I, ρ).
std::pair<ObjId, Elem> point_key(const std::string& key, const Presheaf& h, const std::string& where) {
  const auto colon = key.rfind(':');
  if (colon == std::string::npos) throw InputError(where + ": key \"" + key + "\" is not of the form object:index");
  const auto obj = h.base()->find_object(key.substr(0, colon));
  if (!obj) throw InputError(where + ": unknown object in key \"" + key + "\"");
  const std::string digits = key.substr(colon + 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(where + ": key \"" + key + "\" needs a decimal element index");
  }
  const auto rho = std::stoull(digits);
  if (rho >= h.size(*obj)) throw InputError(where + ": element index out of range in key \"" + key + "\"");
  return {*obj, static_cast<Elem>(rho)};
}

std::pair<ArrId, Elem> arrow_key(const std::string& key, const Presheaf& h, const std::string& where) {
  const auto colon = key.rfind(':');
  if (colon == std::string::npos) throw InputError(where + ": key \"" + key + "\" is not of the form arrow:index");
  const auto f = h.base()->find_arrow(key.substr(0, colon));
  if (!f) throw InputError(where + ": unknown arrow in key \"" + key + "\"");
  const std::string digits = key.substr(colon + 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(where + ": key \"" + key + "\" needs a decimal element index");
  }
  const auto rho = std::stoull(digits);
  if (rho >= h.size(h.base()->cod(*f))) throw InputError(where + ": element index out of range in key \"" + key + "\"");
  return {*f, static_cast<Elem>(rho)};
}

std::string point_name(const FinCategory& c, ObjId i, Elem rho) {
  return c.object_label(i) + ":" + std::to_string(rho);
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = position_of(text, e.byte);
    std::string message = e.what();
    if (auto pos = message.find("syntax error"); pos != std::string::npos) message = message.substr(pos);
    throw InputError(message, line, col);
  }
}

Json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_json(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.message(), e.line(), e.col());
  }
}

CategoryRef category_from_json(const Json& j, const fs::path&) {
  const std::string where = "category";
  const Json& objects = field(j, "objects", where);
  if (!objects.is_array()) throw InputError(where + ": \"objects\" must be an array");
  std::vector<std::string> labels;
  std::set<std::string> names;
  for (const Json& o : objects) {
    labels.push_back(string_of(o, where + " object"));
    if (!names.insert(labels.back()).second) throw InputError(where + ": duplicate object \"" + labels.back() + "\"");
  }
  auto find_label = [&](const std::string& s) -> ObjId {
    for (std::uint32_t x = 0; x < labels.size(); ++x) {
      if (labels[x] == s) return ObjId{x};
    }
    throw InputError(where + ": unknown object \"" + s + "\"");
  };

  std::vector<Arrow> arrows;
  std::vector<ArrId> identities;
  std::set<std::string> arrow_names;
  for (std::uint32_t x = 0; x < labels.size(); ++x) {
    arrows.push_back({"id_" + labels[x], ObjId{x}, ObjId{x}});
    identities.push_back(ArrId{x});
    arrow_names.insert(arrows.back().name);
  }
  if (auto it = j.find("arrows"); it != j.end()) {
    if (!it->is_array()) throw InputError(where + ": \"arrows\" must be an array");
    for (const Json& a : *it) {
      const std::string name = string_of(field(a, "name", where + " arrow"), where + " arrow name");
      if (!arrow_names.insert(name).second) throw InputError(where + ": duplicate arrow \"" + name + "\"");
      arrows.push_back({name, find_label(string_of(field(a, "dom", name), name + " dom")),
                        find_label(string_of(field(a, "cod", name), name + " cod"))});
    }
  }
  const std::size_t m = arrows.size();
  auto find_name = [&](const Json& s) -> std::uint32_t {
    const std::string name = string_of(s, where + " compose");
    for (std::uint32_t f = 0; f < m; ++f) {
      if (arrows[f].name == name) return f;
    }
    throw InputError(where + ": unknown arrow \"" + name + "\" in compose");
  };
  std::vector<std::optional<ArrId>> comp(m * m);
  for (std::uint32_t f = 0; f < m; ++f) {
    comp[identities[arrows[f].dom.index].index * m + f] = ArrId{f};
    comp[f * m + identities[arrows[f].cod.index].index] = ArrId{f};
  }
  if (auto it = j.find("compose"); it != j.end()) {
    if (!it->is_array()) throw InputError(where + ": \"compose\" must be an array");
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const Json& e : *it) {
      const auto first = find_name(field(e, "first", where + " compose"));
      const auto then = find_name(field(e, "then", where + " compose"));
      const auto is = find_name(field(e, "is", where + " compose"));
      if (!seen.insert({first, then}).second) {
        throw InputError(where + ": duplicate compose entry for " + arrows[first].name + " then " + arrows[then].name);
      }
      comp[first * m + then] = ArrId{is};
    }
  }
  return std::make_shared<FinCategory>(std::move(labels), std::move(arrows), std::move(identities), std::move(comp));
}

PresheafRef presheaf_from_json(const Json& j, const fs::path& dir) {
  const std::string where = "presheaf";
  auto [cat_doc, cat_dir] = resolve(field(j, "category", where), dir, where + " category");
  const CategoryRef c = category_from_json(cat_doc, cat_dir);
  const Json& sets_j = object_field(j, "sets", where);
  std::vector<FinSet> sets(c->object_count());
  for (const auto& [key, value] : sets_j.items()) {
    if (!c->find_object(key)) throw InputError(where + ": unknown object \"" + key + "\" in sets");
  }
  for (std::uint32_t x = 0; x < c->object_count(); ++x) {
    const std::string& label = c->object_label(ObjId{x});
    auto it = sets_j.find(label);
    if (it == sets_j.end()) throw InputError(where + ": missing set for object \"" + label + "\"");
    sets[x] = finset_of(*it, where + " set " + label);
  }
  const Json& restrict_j = object_field(j, "restrict", where);
  for (const auto& [key, value] : restrict_j.items()) {
    if (!c->find_arrow(key)) throw InputError(where + ": unknown arrow \"" + key + "\" in restrict");
  }
  std::vector<std::vector<Elem>> restrict(c->arrow_count());
  for (std::uint32_t fi = 0; fi < c->arrow_count(); ++fi) {
    const Arrow& f = c->arrow(ArrId{fi});
    auto it = restrict_j.find(f.name);
    if (it == restrict_j.end()) {
      if (!c->is_identity(ArrId{fi})) throw InputError(where + ": missing restriction for arrow \"" + f.name + "\"");
      for (Elem e = 0; e < sets[f.cod.index].size; ++e) restrict[fi].push_back(e);
      continue;
    }
    if (!it->is_array() || it->size() != sets[f.cod.index].size) {
      throw InputError(where + ": restriction \"" + f.name + "\" needs one entry per element of " +
                       c->object_label(f.cod));
    }
    for (const Json& v : *it) restrict[fi].push_back(index_of(v, sets[f.dom.index].size, where + " restrict " + f.name));
  }
  return std::make_shared<Presheaf>(c, std::move(sets), std::move(restrict));
}

Ty type_from_json(const Json& j, const fs::path& dir) {
  const std::string where = "type";
  auto [ctx_doc, ctx_dir] = resolve(field(j, "ctx", where), dir, where + " ctx");
  const Ctx h = presheaf_from_json(ctx_doc, ctx_dir);
  const FinCategory& c = *h->base();
  auto out = std::make_shared<TyInCtx>();
  out->ctx = h;
  out->sizes.resize(c.object_count());
  std::vector<std::vector<bool>> seen(c.object_count());
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    out->sizes[x].assign(h->size(ObjId{x}), 0);
    seen[x].assign(h->size(ObjId{x}), false);
  }
  for (const auto& [key, value] : object_field(j, "sets", where).items()) {
    const auto [i, rho] = point_key(key, *h, where + " sets");
    out->sizes[i.index][rho] = static_cast<std::uint32_t>(finset_of(value, where + " set " + key).size);
    seen[i.index][rho] = true;
  }
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (Elem rho = 0; rho < seen[x].size(); ++rho) {
      if (!seen[x][rho]) throw InputError(where + ": missing set for " + point_name(c, ObjId{x}, rho));
    }
  }
  out->morph.resize(c.arrow_count());
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    const ObjId i = c.cod(ArrId{fi});
    out->morph[fi].resize(h->size(i));
    if (c.is_identity(ArrId{fi})) {
      for (Elem rho = 0; rho < h->size(i); ++rho) {
        for (Elem u = 0; u < out->size(i, rho); ++u) out->morph[fi][rho].push_back(u);
      }
    }
  }
  std::set<std::pair<std::uint32_t, Elem>> given;
  for (const auto& [key, value] : object_field(j, "morph", where).items()) {
    const auto [f, rho] = arrow_key(key, *h, where + " morph");
    const ObjId i = c.cod(f), jj = c.dom(f);
    if (!value.is_array() || value.size() != out->size(i, rho)) {
      throw InputError(where + ": morphism table \"" + key + "\" needs one entry per element of " + point_name(c, i, rho));
    }
    auto& table = out->morph[f.index][rho];
    table.clear();
    const auto bound = out->size(jj, h->restrict(f, rho));
    for (const Json& v : value) table.push_back(index_of(v, bound, where + " morph " + key));
    given.insert({f.index, rho});
  }
  for (std::uint32_t fi = 0; fi < c.arrow_count(); ++fi) {
    if (c.is_identity(ArrId{fi})) continue;
    for (Elem rho = 0; rho < h->size(c.cod(ArrId{fi})); ++rho) {
      if (!given.contains({fi, rho})) {
        throw InputError(where + ": missing morphism table \"" + c.arrow(ArrId{fi}).name + ":" + std::to_string(rho) + "\"");
      }
    }
  }
  return out;
}

TmInCtx term_from_json(const Json& j, const fs::path& dir) {
  const std::string where = "term";
  auto [ty_doc, ty_dir] = resolve(field(j, "ty", where), dir, where + " ty");
  TmInCtx out{type_from_json(ty_doc, ty_dir), {}};
  const Presheaf& h = *out.ctx();
  const FinCategory& c = *h.base();
  std::vector<std::vector<bool>> seen(c.object_count());
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    out.elem.emplace_back(h.size(ObjId{x}), 0);
    seen[x].assign(h.size(ObjId{x}), false);
  }
  for (const auto& [key, value] : object_field(j, "elem", where).items()) {
    const auto [i, rho] = point_key(key, h, where + " elem");
    out.elem[i.index][rho] = index_of(value, out.ty->size(i, rho), where + " elem " + key);
    seen[i.index][rho] = true;
  }
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (Elem rho = 0; rho < seen[x].size(); ++rho) {
      if (!seen[x][rho]) throw InputError(where + ": missing element for " + point_name(c, ObjId{x}, rho));
    }
  }
  return out;
}

Document load_document(const fs::path& path) {
  const Json j = read_json(path);
  const fs::path dir = path.parent_path();
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InputError(path.string() + ": missing \"kind\" field");
  }
  Document doc;
  doc.kind = j["kind"].get<std::string>();
  try {
    if (doc.kind == "category") {
      doc.category = category_from_json(j, dir);
    } else if (doc.kind == "presheaf") {
      doc.presheaf = presheaf_from_json(j, dir);
      doc.category = doc.presheaf->base();
    } else if (doc.kind == "type") {
      doc.type = type_from_json(j, dir);
      doc.presheaf = doc.type->ctx;
      doc.category = doc.presheaf->base();
    } else if (doc.kind == "term") {
      doc.term = term_from_json(j, dir);
      doc.type = doc.term->ty;
      doc.presheaf = doc.type->ctx;
      doc.category = doc.presheaf->base();
    } else {
      throw InputError("unknown kind \"" + doc.kind + "\"");
    }
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.message(), e.line(), e.col());
  }
  return doc;
}

namespace {

template <typename T>
T expect_kind(const fs::path& path, const char* kind, T Document::*member) {
  Document doc = load_document(path);
  if (doc.kind != kind) throw InputError(path.string() + ": expected a " + kind + " document, found " + doc.kind);
  return std::move(doc.*member);
}

}  // namespace

CategoryRef load_category(const fs::path& path) { return expect_kind(path, "category", &Document::category); }
PresheafRef load_presheaf(const fs::path& path) { return expect_kind(path, "presheaf", &Document::presheaf); }
Ty load_type(const fs::path& path) { return expect_kind(path, "type", &Document::type); }
TmInCtx load_term(const fs::path& path) { return *expect_kind(path, "term", &Document::term); }

Json category_to_json(const FinCategory& c) {
  Json out;
  out["kind"] = "category";
  out["objects"] = c.object_labels();
  out["arrows"] = Json::array();
  for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
    if (c.is_identity(ArrId{f})) continue;
    const Arrow& a = c.arrow(ArrId{f});
    out["arrows"].push_back({{"name", a.name}, {"dom", c.object_label(a.dom)}, {"cod", c.object_label(a.cod)}});
  }
  out["compose"] = Json::array();
  for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
    for (std::uint32_t g = 0; g < c.arrow_count(); ++g) {
      if (c.is_identity(ArrId{f}) || c.is_identity(ArrId{g})) continue;
      if (const auto h = c.comp(ArrId{f}, ArrId{g})) {
        out["compose"].push_back(
            {{"first", c.arrow(ArrId{f}).name}, {"then", c.arrow(ArrId{g}).name}, {"is", c.arrow(*h).name}});
      }
    }
  }
  return out;
}

Json presheaf_to_json(const Presheaf& h) {
  const FinCategory& c = *h.base();
  Json out;
  out["kind"] = "presheaf";
  out["category"] = category_to_json(c);
  out["sets"] = Json::object();
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    const FinSet& s = h.set(ObjId{x});
    if (s.labels.empty()) {
      out["sets"][c.object_label(ObjId{x})] = s.size;
    } else {
      out["sets"][c.object_label(ObjId{x})] = s.labels;
    }
  }
  out["restrict"] = Json::object();
  for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
    if (c.is_identity(ArrId{f})) continue;
    out["restrict"][c.arrow(ArrId{f}).name] = h.restrictions()[f];
  }
  return out;
}

Json type_to_json(const TyInCtx& t) {
  const Presheaf& h = *t.ctx;
  const FinCategory& c = *h.base();
  Json out;
  out["kind"] = "type";
  out["ctx"] = presheaf_to_json(h);
  out["sets"] = Json::object();
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) out["sets"][point_name(c, ObjId{x}, rho)] = t.size(ObjId{x}, rho);
  }
  out["morph"] = Json::object();
  for (std::uint32_t f = 0; f < c.arrow_count(); ++f) {
    if (c.is_identity(ArrId{f})) continue;
    for (Elem rho = 0; rho < t.morph[f].size(); ++rho) {
      out["morph"][c.arrow(ArrId{f}).name + ":" + std::to_string(rho)] = t.morph[f][rho];
    }
  }
  return out;
}

Json term_to_json(const TmInCtx& t) {
  const Presheaf& h = *t.ctx();
  const FinCategory& c = *h.base();
  Json out;
  out["kind"] = "term";
  out["ty"] = type_to_json(*t.ty);
  out["elem"] = Json::object();
  for (std::uint32_t x = 0; x < c.object_count(); ++x) {
    for (Elem rho = 0; rho < h.size(ObjId{x}); ++rho) out["elem"][point_name(c, ObjId{x}, rho)] = t(ObjId{x}, rho);
  }
  return out;
}

Json sub_tables(const Sub& s) { return Json(s.components); }

Json ty_tables(const TyInCtx& t) { return Json{{"sizes", t.sizes}, {"morph", t.morph}}; }

Json tm_tables(const TmInCtx& t) { return Json(t.elem); }

}  // namespace pcwf
