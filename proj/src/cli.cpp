#include "pcwf/cli.hpp"

#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcwf/error.hpp"
#include "pcwf/io.hpp"
#include "pcwf/mutation.hpp"
#include "pcwf/surface.hpp"

namespace pcwf::cli {
namespace {

Json input_error_json(const InputError& e) {
  return Json{{"line", e.line()}, {"col", e.col()}, {"message", e.message()}};
}

std::string input_error_text(const InputError& e) {
  if (e.line() == 0) return "error: " + e.message();
  return "error at " + std::to_string(e.line()) + ":" + std::to_string(e.col()) + ": " + e.message();
}

/// Runs `body`, mapping library errors to exit statuses.
int guarded(bool json, std::ostream& out, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    if (json) {
      out << Json{{"error", input_error_json(e)}}.dump(2) << "\n";
    } else {
      out << input_error_text(e) << "\n";
    }
    return kInputError;
  } catch (const BudgetExceeded& e) {
    if (json) {
      out << Json{{"error", {{"message", e.what()}, {"count", e.partial_count()}, {"partial", true}}}}.dump(2) << "\n";
    } else {
      out << "budget exceeded: " << e.what() << "\n";
    }
    return kBudgetExceeded;
  } catch (const Error& e) {
    if (json) {
      out << Json{{"error", {{"message", e.what()}}}}.dump(2) << "\n";
    } else {
      out << "error: " << e.what() << "\n";
    }
    return kInputError;
  }
}

Report validate_document(const Document& d) {
  if (d.kind == "category") return validate_category(*d.category);
  if (d.kind == "presheaf") return validate_presheaf(*d.presheaf);
  if (d.kind == "type") return validate_ty(*d.type);
  Report r = validate_ty(*d.term->ty);
  if (r.ok()) r = validate_tm(*d.term);
  return r;
}

ObjId parse_object(const FinCategory& c, const std::string& text) {
  if (auto x = c.find_object(text)) return *x;
  char* end = nullptr;
  unsigned long n = std::strtoul(text.c_str(), &end, 10);
  if (!text.empty() && *end == '\0' && n < c.object_count()) return ObjId{static_cast<std::uint32_t>(n)};
  throw InputError("unknown object \"" + text + "\"");
}

Json value_json(const TmInCtx& t, ObjId i, Elem rho) {
  const Ctx& h = t.ctx();
  Elem u = t(i, rho);
  return Json{{"object", h->base()->object_label(i)},
              {"env", rho},
              {"env_label", describe_env(h, i, rho)},
              {"elem", u},
              {"label", describe_elem(t.ty, i, rho, u)}};
}

void print_value(std::ostream& out, const std::string& name, const TmInCtx& t, ObjId i, Elem rho) {
  const Ctx& h = t.ctx();
  Elem u = t(i, rho);
  out << "  " << name << "(" << h->base()->object_label(i) << ", " << rho << " = " << describe_env(h, i, rho)
      << ") = " << u << "  " << describe_elem(t.ty, i, rho, u) << "\n";
}

std::string functor_text(const Functor& f) {
  std::string out = "objects:";
  for (ObjId y : f.ob_map) out += " " + f.target->object_label(y);
  out += "  arrows:";
  for (ArrId g : f.arr_map) out += " " + f.target->arrow(g).name;
  return out;
}

void require_args(const std::string& what, const std::vector<std::string>& args, std::size_t n) {
  if (args.size() != n)
    throw InputError("enumerate " + what + " takes " + std::to_string(n) + " file argument" + (n == 1 ? "" : "s"));
}

}  // namespace

void apply_cap_defaults(const std::filesystem::path& file, CliConfig& config) {
  Json j = read_json(file);
  if (!j.is_object()) throw InputError(file.string() + ": cap defaults must be a JSON object");
  auto size = [&](const char* key, std::size_t& into) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0)
      throw InputError(file.string() + ": \"" + key + "\" must be a positive integer");
    into = j[key].get<std::size_t>();
  };
  size("max_objects", config.suite.max_objects);
  size("max_arrows", config.suite.max_arrows);
  size("max_set", config.suite.max_set);
  size("pi_cap", config.suite.pi_cap);
  size("nat_trans_cap", config.nat_trans_cap);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError(file.string() + ": \"seed\" must be a non-negative integer");
    config.suite.seed = j["seed"].get<std::uint64_t>();
    config.seed_set = true;
  }
  if (j.contains("mode")) {
    std::string mode = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
    if (mode == "exhaustive") {
      config.suite.mode = FixtureMode::kExhaustive;
    } else if (mode == "random") {
      config.suite.mode = FixtureMode::kRandom;
    } else {
      throw InputError(file.string() + ": \"mode\" must be \"exhaustive\" or \"random\"");
    }
  }
  for (const auto& [key, _] : j.items()) {
    static const std::vector<std::string> known = {"max_objects", "max_arrows", "max_set", "pi_cap",
                                                   "nat_trans_cap", "seed", "mode"};
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InputError(file.string() + ": unknown key \"" + key + "\"");
  }
}

int cmd_validate(const std::vector<std::string>& paths, bool json, std::ostream& out) {
  int status = kOk;
  Json files = Json::array();
  for (const std::string& path : paths) {
    Json entry{{"path", path}};
    try {
      Document d = load_document(path);
      Report r = validate_document(d);
      entry["kind"] = d.kind;
      entry["valid"] = r.ok();
      entry["violations"] = r.to_json()["violations"];
      if (!json) {
        out << path << " (" << d.kind << "): " << (r.ok() ? "valid" : "INVALID") << "\n";
        if (!r.ok()) out << r.to_string();
      }
      if (!r.ok() && status == kOk) status = kLawFailure;
    } catch (const InputError& e) {
      entry["valid"] = false;
      entry["error"] = input_error_json(e);
      if (!json) out << path << ": " << input_error_text(e) << "\n";
      status = kInputError;
    } catch (const Error& e) {
      InputError wrapped(e.what());
      entry["valid"] = false;
      entry["error"] = input_error_json(wrapped);
      if (!json) out << path << ": " << input_error_text(wrapped) << "\n";
      status = kInputError;
    }
    files.push_back(std::move(entry));
  }
  if (json) out << Json{{"files", files}}.dump(2) << "\n";
  return status;
}

int cmd_yoneda(const std::string& path, std::size_t cap, bool json, std::ostream& out) {
  return guarded(json, out, [&] {
    CategoryRef c = load_category(path);
    Report structure = validate_category(*c);
    if (!structure.ok()) throw InputError(path + " is not a category: " + structure.to_string());
    YonedaReport report = check_yoneda_lemma(c, cap);
    if (json) {
      Json pairs = Json::array();
      for (const YonedaPair& p : report.pairs) {
        pairs.push_back({{"x", c->object_label(p.x)},
                         {"y", c->object_label(p.y)},
                         {"arrows", p.arrows},
                         {"maps", p.maps},
                         {"injective", p.injective},
                         {"bijective", p.bijective}});
      }
      out << Json{{"pairs", pairs}, {"holds", report.ok}}.dump(2) << "\n";
    } else {
      for (const YonedaPair& p : report.pairs) {
        out << (p.bijective ? "ok   " : "FAIL ") << "hom(" << c->object_label(p.x) << ", " << c->object_label(p.y)
            << ") has " << p.arrows << " arrows, " << p.maps << " maps yoneda(" << c->object_label(p.x)
            << ") -> yoneda(" << c->object_label(p.y) << ")\n";
      }
      out << (report.ok ? "Yoneda embedding is full and faithful\n" : "Yoneda embedding is NOT full and faithful\n");
    }
    return report.ok ? kOk : kLawFailure;
  });
}

int cmd_rules(const SuiteConfig& config, bool json, std::ostream& out) {
  return guarded(json, out, [&] {
    SuiteReport report = run_suite(config);
    out << (json ? report.to_json().dump(2) + "\n" : report.to_text());
    return report.ok() ? kOk : kLawFailure;
  });
}

int cmd_eval(const std::string& script, const std::optional<std::string>& at, std::optional<std::size_t> env,
             std::size_t pi_cap, bool json, std::ostream& out) {
  return guarded(json, out, [&] {
    surface::SessionResult session = surface::run_script_file(script, pi_cap);
    if (session.terms.empty()) throw InputError(script + " declares no terms");
    std::vector<std::string> targets = session.eval_targets;
    if (targets.empty()) targets.push_back(session.terms.back().name);
    auto find = [&](const std::string& name) -> const surface::TermResult& {
      for (const auto& t : session.terms)
        if (t.name == name) return t;
      throw InputError("unknown term \"" + name + "\"");
    };

    int status = kOk;
    std::ostringstream text;
    Json results = Json::array();
    for (const std::string& name : session.check_targets) {
      const auto& t = find(name);
      if (!t.validation.ok()) status = kLawFailure;
      if (json) {
        results.push_back({{"name", name}, {"check", t.validation.ok()}, {"violations", t.validation.to_json()["violations"]}});
      } else {
        text << "check " << name << ": " << (t.validation.ok() ? "valid" : "INVALID") << "\n";
        if (!t.validation.ok()) text << t.validation.to_string();
      }
    }
    for (const std::string& name : targets) {
      const auto& t = find(name);
      const FinCategory& c = *t.value.ctx()->base();
      std::vector<ObjId> objects;
      if (at) {
        objects.push_back(parse_object(c, *at));
      } else {
        if (env) throw InputError("--env needs --at");
        for (std::uint32_t i = 0; i < c.object_count(); ++i) objects.push_back(ObjId{i});
      }
      Json values = Json::array();
      if (!json) text << name << " = " << surface::print_combinator(*t.combinator) << "\n";
      for (ObjId i : objects) {
        std::size_t n = t.value.ctx()->size(i);
        if (env && *env >= n)
          throw InputError("environment " + std::to_string(*env) + " out of range at object " + c.object_label(i) +
                           " (" + std::to_string(n) + " environments)");
        for (Elem rho = 0; rho < n; ++rho) {
          if (env && rho != *env) continue;
          if (json) {
            values.push_back(value_json(t.value, i, rho));
          } else {
            print_value(text, name, t.value, i, rho);
          }
        }
      }
      if (!t.validation.ok()) status = kLawFailure;
      if (json) {
        results.push_back({{"name", name},
                           {"combinator", surface::print_combinator(*t.combinator)},
                           {"valid", t.validation.ok()},
                           {"values", values}});
      }
    }
    if (json) {
      out << Json{{"results", results}}.dump(2) << "\n";
    } else {
      out << text.str();
    }
    return status;
  });
}

int cmd_enumerate(const std::string& what, const std::vector<std::string>& args, const CliConfig& config,
                  std::ostream& out) {
  const bool json = config.json;
  return guarded(json, out, [&] {
    std::vector<std::string> listing;
    Json listing_json = Json::array();
    std::size_t count = 0;
    if (what == "functors") {
      require_args(what, args, 2);
      auto fs = enumerate_functors(load_category(args[0]), load_category(args[1]), config.nat_trans_cap);
      count = fs.size();
      for (const Functor& f : fs) {
        listing.push_back(functor_text(f));
        listing_json.push_back({{"objects", f.ob_map.size()}, {"text", listing.back()}});
      }
    } else if (what == "nattrans") {
      require_args(what, args, 2);
      auto ms = enumerate_pshmaps(load_presheaf(args[0]), load_presheaf(args[1]), config.nat_trans_cap);
      count = ms.size();
      for (const PshMap& m : ms) {
        listing_json.push_back(sub_tables(m));
        listing.push_back(sub_tables(m).dump());
      }
    } else if (what == "terms") {
      require_args(what, args, 1);
      Ty t = load_type(args[0]);
      Report r = validate_ty(*t);
      if (!r.ok()) throw InputError(args[0] + " is not a valid type: " + r.to_string());
      auto ts = enumerate_terms(t, config.nat_trans_cap);
      count = ts.size();
      for (const TmInCtx& m : ts) {
        listing_json.push_back(tm_tables(m));
        listing.push_back(tm_tables(m).dump());
      }
    } else if (what == "pi-elements") {
      require_args(what, args, 2);
      Ty a = load_type(args[0]);
      Ty loaded_b = load_type(args[1]);
      Report r = validate_ty(*a);
      if (!r.ok()) throw InputError(args[0] + " is not a valid type: " + r.to_string());
      Ctx ext = ctx_extend(a->ctx, a);
      if (!same_presheaf(loaded_b->ctx, ext))
        throw InputError(args[1] + " is not a type over the extension of " + args[0] + "'s context by it");
      auto b = std::make_shared<TyInCtx>(*loaded_b);
      b->ctx = ext;
      r = validate_ty(*b);
      if (!r.ok()) throw InputError(args[1] + " is not a valid type: " + r.to_string());
      Ty pi = pi_ty(a, b, config.suite.pi_cap);
      const FinCategory& c = *a->ctx->base();
      std::vector<ObjId> objects;
      if (config.at) {
        objects.push_back(parse_object(c, *config.at));
      } else {
        for (std::uint32_t i = 0; i < c.object_count(); ++i) objects.push_back(ObjId{i});
      }
      for (ObjId i : objects) {
        for (Elem rho = 0; rho < a->ctx->size(i); ++rho) {
          if (config.env && rho != *config.env) continue;
          const PiFiber& fiber = *pi->pi[i.index][rho];
          count += fiber.tables.size();
          for (Elem u = 0; u < fiber.tables.size(); ++u) {
            listing.push_back(c.object_label(i) + " " + std::to_string(rho) + " " + describe_elem(pi, i, rho, u));
            listing_json.push_back({{"object", c.object_label(i)}, {"env", rho}, {"table", fiber.tables[u]}});
          }
        }
      }
    } else {
      throw InputError("unknown enumeration \"" + what + "\" (functors, nattrans, terms, pi-elements)");
    }
    if (json) {
      Json o{{"what", what}, {"count", count}, {"partial", false}};
      if (config.list) o["items"] = listing_json;
      out << o.dump(2) << "\n";
    } else {
      out << what << ": " << count << "\n";
      if (config.list)
        for (const auto& line : listing) out << "  " << line << "\n";
    }
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig config;
  if (const char* defaults = std::getenv("PRESHEAF_CWF_CAP_DEFAULTS"); defaults && *defaults) {
    try {
      apply_cap_defaults(defaults, config);
    } catch (const InputError& e) {
      err << input_error_text(e) << "\n";
      return kInputError;
    }
  }

  CLI::App app{"Finite presheaf models of dependent type theory"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string mode = config.suite.mode == FixtureMode::kRandom ? "random" : "exhaustive";
  app.add_flag("--json", config.json, "Machine-readable output");
  app.add_option("--mutation", config.mutation, "Run with a deliberately broken kernel")->group("");

  auto* validate = app.add_subcommand("validate", "Validate category, presheaf, type and term files");
  validate->add_option("files", config.inputs, "Input files")->required();

  auto* yoneda_cmd = app.add_subcommand("yoneda", "Check the Yoneda embedding on a category");
  yoneda_cmd->add_option("category", config.inputs, "Category file")->required()->expected(1);

  auto* rules = app.add_subcommand("rules", "Run the structural and former rule suite");
  rules->add_option("--rule", config.suite.rules, "Only these rules (repeatable)");
  rules->add_option("--seed", config.suite.seed, "Seed for random mode")
      ->each([&](const std::string&) { config.seed_set = true; });
  rules->add_option("--mode", mode, "exhaustive or random")->check(CLI::IsMember({"exhaustive", "random"}));
  rules->add_option("--max-objects", config.suite.max_objects)->check(CLI::PositiveNumber);
  rules->add_option("--max-set", config.suite.max_set)->check(CLI::PositiveNumber);
  rules->add_option("--pi-cap", config.suite.pi_cap)->check(CLI::PositiveNumber);
  rules->add_option("--threads", config.suite.threads, "Worker threads (0: one per core)");
  rules->add_flag("--fail-fast", config.suite.fail_fast, "Stop at the first failing fixture");

  auto* eval = app.add_subcommand("eval", "Elaborate a script and evaluate its terms");
  eval->add_option("script", config.inputs, "Script (.mltt)")->required()->expected(1);
  eval->add_option("--at", config.at, "Object (name or index)");
  eval->add_option("--env", config.env, "Environment index at that object");
  eval->add_option("--pi-cap", config.suite.pi_cap)->check(CLI::PositiveNumber);

  std::string what;
  auto* enumerate = app.add_subcommand("enumerate", "Count functors, natural transformations, terms or Pi elements");
  enumerate->add_option("what", what, "functors | nattrans | terms | pi-elements")->required();
  enumerate->add_option("files", config.inputs, "Input files");
  enumerate->add_flag("--list", config.list, "List the items in canonical order");
  enumerate->add_option("--cap", config.nat_trans_cap, "Enumeration cap")->check(CLI::PositiveNumber);
  enumerate->add_option("--pi-cap", config.suite.pi_cap)->check(CLI::PositiveNumber);
  enumerate->add_option("--at", config.at, "Object (name or index)");
  enumerate->add_option("--env", config.env, "Environment index at that object");
  yoneda_cmd->add_option("--cap", config.nat_trans_cap, "Enumeration cap")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  config.suite.mode = mode == "random" ? FixtureMode::kRandom : FixtureMode::kExhaustive;
  if (config.suite.mode == FixtureMode::kRandom && !config.seed_set) {
    err << "error: random mode needs --seed\n";
    return kInputError;
  }

  std::optional<ScopedMutation> mutation;
  if (!config.mutation.empty()) {
    auto m = mutation_from_name(config.mutation);
    if (!m) {
      err << "error: unknown mutation \"" << config.mutation << "\"\n";
      return kInputError;
    }
    mutation.emplace(*m);
  }

  if (*validate) return cmd_validate(config.inputs, config.json, out);
  if (*yoneda_cmd) return cmd_yoneda(config.inputs.front(), config.nat_trans_cap, config.json, out);
  if (*rules) return cmd_rules(config.suite, config.json, out);
  if (*eval) return cmd_eval(config.inputs.front(), config.at, config.env, config.suite.pi_cap, config.json, out);
  return cmd_enumerate(what, config.inputs, config, out);
}

}  // namespace pcwf::cli
