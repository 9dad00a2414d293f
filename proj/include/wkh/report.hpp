#pragma once

#include <string>
#include <vector>

namespace wkh {

/// Scientific notation with 6 significant digits, e.g. "1.23457e-10".
std::string sci(double v);

struct Check {
  std::string name;
  std::string tag;  ///< source-result label shown in reports, e.g. "Prop 4.14"
  double residual = 0.0;
  bool pass = false;
  std::string note;
};

/// Ordered list of residual checks. A check passes iff residual <= tolerance.
class Report {
 public:
  explicit Report(double tolerance = 1e-9) : tolerance_(tolerance) {}

  /// Records a residual check; returns its pass flag.
  bool add(std::string name, std::string tag, double residual, std::string note = {});
  /// Records a yes/no check (residual 0 on success, 1 on failure).
  bool require(std::string name, std::string tag, bool ok, std::string note = {});
  /// Records an informational line that never fails.
  void info(std::string name, std::string tag, std::string note);

  void merge(const Report& other, const std::string& prefix = {});

  bool all_pass() const;
  double tolerance() const { return tolerance_; }
  const std::vector<Check>& checks() const { return checks_; }
  const Check* find(const std::string& name) const;
  double max_residual() const;
  /// Names of failing checks joined by ", ".
  std::string failures() const;

  std::string classification;  ///< "weak Kac", "weak C*-Hopf", "invalid" or empty

 private:
  double tolerance_;
  std::vector<Check> checks_;
};

}  // namespace wkh
