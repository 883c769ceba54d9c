#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sphrobin {

struct Check {
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // signed slack; negative means violated before tolerance
  bool pass = false;
};

/// Structured pass/fail record of one verification pipeline.
struct VerificationReport {
  std::string name;
  std::vector<Check> checks;
  /// Named scalars carried for tabulation (perimeter, area, eigenvalues ...).
  std::vector<std::pair<std::string, double>> values;
  /// Set when every inequality holds as an equality (ball inputs).
  bool equality = false;
  std::vector<std::string> notes;

  bool overall() const;
  void add(std::string description, double lhs, double rhs, double residual, bool pass);
  /// Records lhs <= rhs + tol; the residual is rhs - lhs.
  void add_le(std::string description, double lhs, double rhs, double tol);
  double value(const std::string& key) const;
};

/// JSON object with name, overall, equality, checks[], values{} and notes[].
std::string report_to_json(const VerificationReport& report, int indent = 2);

}  // namespace sphrobin
