#pragma once

#include <optional>
#include <vector>

#include "fbns/functionals.hpp"
#include "fbns/report.hpp"
#include "fbns/solver.hpp"

namespace fbns {

/// Scheme-order-aware tolerances: second order for identities integrated by
/// the two-stage scheme, first order for space-time quadratures of the weak
/// form.
struct ToleranceModel {
  double c1 = 10.0;  ///< weight of the spatial term
  double c2 = 10.0;  ///< weight of the temporal term

  double identity(double dx, double dt) const {
    return c1 * dx * dx + c2 * dt * dt;
  }
  double first_order(double dx, double dt) const { return c1 * dx + c2 * dt; }
};

/// Separable space-time test function: the C^2 bump (1-s^2)^3 in both the
/// radius and the time variable.
struct SpaceTimeBump {
  double rc = 0.0, rw = 1.0;  ///< radial center and half-width
  double tc = 0.0, tw = 1.0;  ///< temporal center and half-width

  double value(double r, double t) const;
  double dr(double r, double t) const;
  double dt(double r, double t) const;
};

/// Deterministic family of test functions fitted to a trajectory: supports
/// stay strictly inside the fluid region at all times and vanish at the
/// final time.
struct TestFunctionFamily {
  std::vector<SpaceTimeBump> members;
  static TestFunctionFamily standard(const Trajectory& traj);
};

/// |E(tau) + D(tau) - E0| for both dissipation decompositions, plus their
/// mutual consistency.
std::vector<CheckResult> check_energy_identity(const Trajectory& traj,
                                               const Params& p,
                                               const ToleranceModel& tol);

/// Lagrangian mass defect (machine precision) and the radial recomputation.
std::vector<CheckResult> check_mass(const Trajectory& traj, const Params& p,
                                    const ToleranceModel& tol);

/// Lower radius bound, interface bracket, and pairwise r^N gap bound.
std::vector<CheckResult> check_radius_bounds(const Trajectory& traj,
                                             const Params& p);

/// Density envelopes in mass and radial form up to the monitored horizon;
/// violations past the horizon are inconclusive, not failures. Includes the
/// fitted vacuum-rate slope.
std::vector<CheckResult> check_envelopes(const Trajectory& traj,
                                         const Params& p);

/// Space-time residuals of the weak continuity and momentum forms for the
/// test family, all integrals evaluated in mass coordinates.
std::vector<CheckResult> check_weak_form(const Trajectory& traj,
                                         const TestFunctionFamily& fam,
                                         const Params& p,
                                         const ToleranceModel& tol);

/// Discrete residual of the effective-velocity transport equation
/// v_tau + (rho^gamma)_x r^{N-1} = 0 over [0, x_cut].
CheckResult check_bd_residual(const Trajectory& traj, const Params& p,
                              const RegionSpec& region,
                              const ToleranceModel& tol);

/// Moment boundedness against the velocity monitor and the Cauchy-Schwarz
/// log-convexity of the moment family.
std::vector<CheckResult> check_moments(const Trajectory& traj, const Params& p,
                                       const RegionSpec& region);

/// Parts of the trajectory-separation functional between two runs.
struct SeparationFunctional {
  double omega2 = 0.0;  ///< int (u1-u2)^2 dx
  double r2w = 0.0;     ///< int rho1^{theta-1} (r1/r2 - 1)^2 dx
  double rho2w = 0.0;   ///< int_0^{x_cut} rho1^{theta-3} (rho1-rho2)^2 dx

  double g() const { return omega2 + r2w + rho2w; }
};

SeparationFunctional separation_functional(const LagrangianState& s1,
                                           const LagrangianState& s2,
                                           double x_cut, const Params& p);

struct ContractionReport {
  std::vector<double> taus;
  std::vector<SeparationFunctional> series;
  double c_fit = 0.0;      ///< least-squares slope of log G
  double log_slack = 0.0;  ///< residual scatter allowance in the envelope
  double floor = 1e-26;
  CheckResult check;
};

/// Growth-rate fit of the separation functional between two trajectories on
/// the same grid and snapshot times; passes when G stays under the fitted
/// exponential envelope plus the floor.
ContractionReport uniqueness_contraction(const Trajectory& t1,
                                         const Trajectory& t2, double x_cut,
                                         const Params& p,
                                         double floor = 1e-26);

/// Boundedness monitors: dissipation accumulations, interior difference-
/// quotient norms in the radial variable, boundary-region integrals, and the
/// quartic-vs-quadratic stress ratio. lambda0 defaults to the midpoint of
/// its admissible interval and is rejected outside it.
std::vector<CheckResult> regularity_monitor(const Trajectory& traj,
                                            const RegionSpec& region,
                                            const Params& p,
                                            std::optional<double> lambda0 = {},
                                            double cap_factor = 100.0);

/// Admissible interval (1, min{4m/(4m b + 1), 1/(b (theta+1))}) for the
/// velocity-gradient integrability exponent.
std::pair<double, double> lambda0_interval(const Params& p);

/// Least-squares slope of log(residual) against log(dx).
double fit_order(const std::vector<double>& dx,
                 const std::vector<double>& residuals);

/// Runs the full single-trajectory suite.
VerificationReport run_verification(const Trajectory& traj, const Params& p,
                                    const RegionSpec& region,
                                    const ToleranceModel& tol,
                                    std::optional<double> lambda0 = {});

}  // namespace fbns
