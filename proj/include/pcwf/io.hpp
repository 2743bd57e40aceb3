#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "pcwf/cwf.hpp"

namespace pcwf {

using Json = nlohmann::ordered_json;

/// One loaded file, discriminated by its top-level "kind" field
/// ("category", "presheaf", "type" or "term").
struct Document {
  std::string kind;
  CategoryRef category;
  PresheafRef presheaf;
  Ty type;
  std::optional<TmInCtx> term;
};

/// Reads and parses a JSON file; syntax errors carry line and column.
Json read_json(const std::filesystem::path& path);
Json parse_json(const std::string& text);

// Loaders. References to other documents are either inline objects or
// paths relative to `dir`. Loaders check names, arities and index ranges;
// the category and functor laws are left to the validators.
CategoryRef category_from_json(const Json& j, const std::filesystem::path& dir);
PresheafRef presheaf_from_json(const Json& j, const std::filesystem::path& dir);
Ty type_from_json(const Json& j, const std::filesystem::path& dir);
TmInCtx term_from_json(const Json& j, const std::filesystem::path& dir);

Document load_document(const std::filesystem::path& path);
CategoryRef load_category(const std::filesystem::path& path);
PresheafRef load_presheaf(const std::filesystem::path& path);
Ty load_type(const std::filesystem::path& path);
TmInCtx load_term(const std::filesystem::path& path);

// Writers producing documents the loaders accept.
Json category_to_json(const FinCategory& c);
Json presheaf_to_json(const Presheaf& h);
Json type_to_json(const TyInCtx& t);
Json term_to_json(const TmInCtx& t);

// Bare tables, used in reports.
Json sub_tables(const Sub& s);
Json ty_tables(const TyInCtx& t);
Json tm_tables(const TmInCtx& t);

}  // namespace pcwf
