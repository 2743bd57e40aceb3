#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pcwf/error.hpp"
#include "pcwf//cli.hpp"

namespace {

const std::filesystem::path kData = PCWF_DATA_DIR;

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pcwf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int status = pcwf::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string data(const char* name) { return (kData / name).string(); }

std::filesystem::path scratch(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("pcwf_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate") {
    CHECK(run({"validate", data("walking_arrow.json")}).status == 0);
    CHECK(run({"validate", data("arrow_presheaf.json"), data("arrow_type.json"), data("arrow_term.json")}).status == 0);
    auto broken = run({"validate", data("broken_chain3.json")});
    CHECK(broken.status == 1);
    CHECK(broken.out.find("missing composite at f then g") != std::string::npos);
    auto law = run({"validate", "--json", data("broken_presheaf.json")});
    CHECK(law.status == 1);
    CHECK(law.out.find("\"law\": \"identity\"") != std::string::npos);
    CHECK(run({"validate", data("missing.json")}).status == 2);
    auto bad = scratch("bad.json", "{\n  \"kind\": \"category\",\n  \"objects\": [\"a\" \"b\"]\n}\n");
    auto syntax = run({"validate", "--json", bad.string()});
    CHECK(syntax.status == 2);
    CHECK(syntax.out.find("\"line\": 3") != std::string::npos);
    // Every violation is reported, and input errors win over law failures.
    auto both = run({"validate", data("broken_presheaf.json"), data("missing.json")});
    CHECK(both.status == 2);
    CHECK(both.out.find("composition") != std::string::npos);
  }

  TEST_CASE("yoneda") {
    CHECK(run({"yoneda", data("terminal.json")}).status == 0);
    auto chain = run({"yoneda", "--json", data("chain3.json")});
    CHECK(chain.status == 0);
    CHECK(chain.out.find("\"holds\": true") != std::string::npos);
    auto capped = run({"yoneda", data("parallel_arrows.json"), "--cap", "1"});
    CHECK(capped.status == 3);
    CHECK(capped.out.find("yoneda(a) -> yoneda(b)") != std::string::npos);
  }

  TEST_CASE("rules") {
    auto one = run({"rules", "--rule", "F11", "--max-objects", "1", "--max-set", "2"});
    CHECK(one.status == 0);
    CHECK(one.out.find("1/1 rules pass") != std::string::npos);
    auto bug = run({"rules", "--rule", "F11", "--max-objects", "2", "--max-set", "2", "--mutation",
                    "app-non-identity", "--fail-fast"});
    CHECK(bug.status == 1);
    CHECK(run({"rules", "--rule", "S99"}).status == 2);
    CHECK(run({"rules", "--mode", "random"}).status == 2);
    CHECK(run({"rules", "--mutation", "no-such-bug"}).status == 2);
  }

  TEST_CASE("eval") {
    auto id = run({"eval", data("identity.mltt")});
    CHECK(id.status == 0);
    CHECK(id.out.find("one = app(lam(q), #1)") != std::string::npos);
    CHECK(id.out.find(") = 1") != std::string::npos);
    auto at = run({"eval", "--json", data("variables.mltt"), "--at", "b", "--env", "29"});
    CHECK(at.status == 0);
    CHECK(at.out.find("\"combinator\": \"((q)p)p\"") != std::string::npos);
    CHECK(run({"eval", data("identity.mltt"), "--at", "*", "--env", "1"}).status == 2);
    CHECK(run({"eval", data("identity.mltt"), "--at", "nowhere"}).status == 2);
    auto script = scratch("bad.mltt", "ctx H = empty\nterm t : {2} = \\x in H\n");
    auto err = run({"eval", "--json", script.string()});
    CHECK(err.status == 2);
    CHECK(err.out.find("\"line\": 2") != std::string::npos);
    CHECK(err.out.find("\"col\": 19") != std::string::npos);
  }

  TEST_CASE("enumerate") {
    auto fs = run({"enumerate", "functors", data("walking_arrow.json"), data("walking_arrow.json"), "--list"});
    CHECK(fs.status == 0);
    CHECK(fs.out.find("functors: 3") != std::string::npos);
    auto capped = run({"enumerate", "--json", "functors", data("chain3.json"), data("chain3.json"), "--cap", "2"});
    CHECK(capped.status == 3);
    CHECK(capped.out.find("\"partial\": true") != std::string::npos);
    CHECK(run({"enumerate", "terms", data("arrow_type.json")}).out == "terms: 6\n");
    CHECK(run({"enumerate", "nattrans", data("arrow_presheaf.json"), data("arrow_presheaf.json")}).status == 0);
    CHECK(run({"enumerate", "widgets"}).status == 2);
    CHECK(run({"enumerate", "functors", data("terminal.json")}).status == 2);
  }

  TEST_CASE("JSON output is byte-stable") {
    std::vector<std::string> args = {"rules", "--json", "--max-objects", "1", "--max-set", "2", "--rule", "S8"};
    CHECK(run(args).out == run(args).out);
    std::vector<std::string> eval = {"eval", "--json", data("pairs.mltt")};
    CHECK(run(eval).out == run(eval).out);
  }

  TEST_CASE("cap defaults file") {
    auto defaults = scratch("caps.json", R"({"max_objects": 1, "max_set": 2})");
    ::setenv("PRESHEAF_CWF_CAP_DEFAULTS", defaults.c_str(), 1);
    auto from_file = run({"rules", "--json", "--rule", "S1"});
    ::unsetenv("PRESHEAF_CWF_CAP_DEFAULTS");
    auto from_flags = run({"rules", "--json", "--rule", "S1", "--max-objects", "1", "--max-set", "2"});
    CHECK(from_file.status == 0);
    CHECK(from_file.out == from_flags.out);

    ::setenv("PRESHEAF_CWF_CAP_DEFAULTS", defaults.c_str(), 1);
    auto overridden = run({"rules", "--json", "--rule", "S1", "--max-set", "1"});
    ::unsetenv("PRESHEAF_CWF_CAP_DEFAULTS");
    CHECK(overridden.out == run({"rules", "--json", "--rule", "S1", "--max-objects", "1", "--max-set", "1"}).out);

    auto broken = scratch("caps_bad.json", R"({"max_sets": 1})");
    ::setenv("PRESHEAF_CWF_CAP_DEFAULTS", broken.c_str(), 1);
    CHECK(run({"rules", "--rule", "S1"}).status == 2);
    ::unsetenv("PRESHEAF_CWF_CAP_DEFAULTS");
  }
}
