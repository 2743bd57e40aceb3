#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcwf/rules.hpp"

namespace pcwf::cli {

enum ExitCode : int { kOk = 0, kLawFailure = 1, kInputError = 2, kBudgetExceeded = 3 };

struct CliConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  SuiteConfig suite;
  bool seed_set = false;  // random mode requires a seed
  std::size_t nat_trans_cap = 100000;  // maps/functors/terms enumerated by `yoneda` and `enumerate`
  bool json = false;
  bool list = false;
  std::optional<std::string> at;
  std::optional<std::size_t> env;
  std::string mutation;
};

/// Reads cap defaults from a JSON object with any of the keys max_objects,
/// max_arrows, max_set, pi_cap, nat_trans_cap, seed and mode.
void apply_cap_defaults(const std::filesystem::path& file, CliConfig& config);

int cmd_validate(const std::vector<std::string>& paths, bool json, std::ostream& out);
int cmd_yoneda(const std::string& path, std::size_t cap, bool json, std::ostream& out);
int cmd_rules(const SuiteConfig& config, bool json, std::ostream& out);
int cmd_eval(const std::string& script, const std::optional<std::string>& at, std::optional<std::size_t> env,
             std::size_t pi_cap, bool json, std::ostream& out);
/// what: functors | nattrans | terms | pi-elements.
int cmd_enumerate(const std::string& what, const std::vector<std::string>& args, const CliConfig& config,
                  std::ostream& out);

/// Full command line; PRESHEAF_CWF_CAP_DEFAULTS is consulted before flags.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcwf::cli
