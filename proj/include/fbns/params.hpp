#pragma once

#include <map>
#include <string>
#include <vector>

namespace fbns {

/// Physical and structural constants of the free-boundary problem.
///
/// The pressure law is rho^gamma, the viscosity rho^theta, and the initial
/// density vanishes at the interface like (a0-r)^sigma in the radial variable,
/// equivalently (1-x)^beta in mass coordinates with beta = sigma/(1+sigma).
struct Params {
  int dim = 2;               ///< spatial dimension N, 2 or 3
  double gamma = 2.0;        ///< adiabatic exponent, > 1
  double theta = 1.0;        ///< viscosity exponent
  double sigma = 0.5;        ///< radial vacuum rate, > 0
  int m = 2;                 ///< moment integer
  double rho_star_lo = 1.0;  ///< lower pinch constant rho_*
  double rho_star_hi = 2.0;  ///< upper pinch constant rho^*
  double a0 = 1.0;           ///< initial interface radius

  /// Mass-coordinate vacuum rate, derived exactly from sigma.
  double beta() const { return sigma / (1.0 + sigma); }
};

struct Violation {
  std::string id;  ///< constraint identifier, e.g. "A1.theta_lower"
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<Violation> violations;
  std::map<std::string, double> derived;  ///< computed thresholds
};

/// Evaluates the structural constraints on (gamma, theta, beta, m) plus basic
/// sanity of the pinch constants and geometry. All comparisons are strict;
/// boundary cases are rejected.
AdmissibilityReport validate_params(const Params& p);

}  // namespace fbns
