#pragma once

#include <map>
#include <string>
#include <vector>

namespace fbns {

enum class CheckStatus { Pass, Fail, Inconclusive };

/// Outcome of one executable check: a residual against a tolerance, or a
/// margin that must stay nonnegative (tolerance 0 in that case).
struct CheckResult {
  std::string id;
  CheckStatus status = CheckStatus::Fail;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string what;  ///< one-line description of the quantity checked
  std::string note;  ///< optional detail (location of worst violation, ...)
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  /// check id -> fitted convergence order, filled by refinement studies.
  std::map<std::string, double> orders;

  bool all_passed(bool inconclusive_ok = true) const {
    for (const auto& c : checks) {
      if (c.status == CheckStatus::Fail) return false;
      if (!inconclusive_ok && c.status == CheckStatus::Inconclusive)
        return false;
    }
    return true;
  }

  void add(CheckResult c) { checks.push_back(std::move(c)); }
};

const char* to_string(CheckStatus s);

}  // namespace fbns
