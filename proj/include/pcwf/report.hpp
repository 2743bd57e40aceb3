#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace pcwf {

struct Violation {
  enum class Kind { kStructural, kLaw };

  Kind kind = Kind::kLaw;
  std::string law;       // e.g. "associativity", "naturality"
  std::string location;  // offending arrows / elements
  std::string lhs;
  std::string rhs;

  std::string to_string() const;
};

/// Result of a validator. Structural problems are reported before (and
/// instead of) law checks, since laws cannot be evaluated on malformed tables.
class Report {
 public:
  bool ok() const { return violations_.empty(); }
  bool structural() const;

  void structural_error(std::string law, std::string location);
  void law_violation(std::string law, std::string location, std::string lhs, std::string rhs);
  void append(const Report& other, const std::string& prefix = {});

  const std::vector<Violation>& violations() const { return violations_; }
  std::string to_string() const;
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<Violation> violations_;
};

}  // namespace pcwf
