#include "pcwf/report.hpp"

#include <algorithm>

namespace pcwf {

std::string Violation::to_string() const {
  std::string out = kind == Kind::kStructural ? "structural: " : "law: ";
  out += law;
  if (!location.empty()) out += " at " + location;
  if (!lhs.empty() || !rhs.empty()) out += " (" + lhs + " != " + rhs + ")";
  return out;
}

bool Report::structural() const {
  return std::any_of(violations_.begin(), violations_.end(),
                     [](const Violation& v) { return v.kind == Violation::Kind::kStructural; });
}

void Report::structural_error(std::string law, std::string location) {
  violations_.push_back({Violation::Kind::kStructural, std::move(law), std::move(location), {}, {}});
}

void Report::law_violation(std::string law, std::string location, std::string lhs, std::string rhs) {
  violations_.push_back(
      {Violation::Kind::kLaw, std::move(law), std::move(location), std::move(lhs), std::move(rhs)});
}

void Report::append(const Report& other, const std::string& prefix) {
  for (Violation v : other.violations_) {
    if (!prefix.empty()) v.location = prefix + (v.location.empty() ? "" : ": " + v.location);
    violations_.push_back(std::move(v));
  }
}

std::string Report::to_string() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations_) out += v.to_string() + "\n";
  return out;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json out;
  out["ok"] = ok();
  out["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : violations_) {
    out["violations"].push_back({{"kind", v.kind == Violation::Kind::kStructural ? "structural" : "law"},
                                 {"law", v.law},
                                 {"location", v.location},
                                 {"lhs", v.lhs},
                                 {"rhs", v.rhs}});
  }
  return out;
}

}  // namespace pcwf
