#include "sphrobin/report.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

namespace sphrobin {

bool VerificationReport::overall() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void VerificationReport::add(std::string description, double lhs, double rhs, double residual,
                             bool pass) {
  checks.push_back({std::move(description), lhs, rhs, residual, pass});
}

void VerificationReport::add_le(std::string description, double lhs, double rhs, double tol) {
  add(std::move(description), lhs, rhs, rhs - lhs, lhs <= rhs + tol);
}

double VerificationReport::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string report_to_json(const VerificationReport& report, int indent) {
  nlohmann::ordered_json doc;
  doc["name"] = report.name;
  doc["overall"] = report.overall();
  doc["equality"] = report.equality;
  doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    doc["checks"].push_back({{"description", c.description},
                             {"lhs", c.lhs},
                             {"rhs", c.rhs},
                             {"residual", c.residual},
                             {"pass", c.pass}});
  }
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.values) values[k] = v;
  doc["values"] = values;
  doc["notes"] = report.notes;
  return doc.dump(indent);
}

}  // namespace sphrobin
