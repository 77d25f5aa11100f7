#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fbns/grid.hpp"

namespace fbns {

/// Discrete Lagrangian state on a fixed mass grid. Density lives on cells,
/// velocity and radius on nodes; the interface radius a equals r at x=1.
struct LagrangianState {
  double tau = 0.0;
  Array rho;  ///< M cell densities, positive in the interior
  Array u;    ///< M+1 node velocities, u[0] == 0
  Array r;    ///< M+1 node radii, strictly increasing, r[0] == 0
  double a = 0.0;
  std::shared_ptr<const MassGrid> grid;

  const MassGrid& g() const { return *grid; }
  Index num_cells() const { return rho.size(); }
};

/// Running values of the four dissipation time-integrals, prefactors applied.
/// The energy balance admits two equivalent splits of the dissipated power:
/// a "gradient" split built on r^{N-1}u_x plus a geometric u/r term, and a
/// "divergence" split built on (r^{N-1}u)_x plus a shear-like remainder.
struct DissipationTotals {
  double grad_geom = 0.0;  ///< [1-N(1-th)](N-1) * int rho^{th-1} u^2/r^2
  double grad_visc = 0.0;  ///< [1-N(1-th)] * int rho^{1+th} (r^{N-1}u_x)^2
  double div_flux = 0.0;   ///< (th-1+1/N)  * int rho^{th+1} [(r^{N-1}u)_x]^2
  double div_shear = 0.0;  ///< (N-1)/N     * int rho^{th+1} (r^{N-1}u_x - u/(r rho))^2

  double total_grad() const { return grad_geom + grad_visc; }
  double total_div() const { return div_flux + div_shear; }
};

struct MonitorSample {
  double tau = 0.0;
  double stress_max = 0.0;  ///< max over cells of |rho r^{N-1} u_x|
  double u_max = 0.0;       ///< max over nodes of |u|
};

enum class HaltReason { None, Horizon, MonitorTrip, StepUnderflow };

const char* to_string(HaltReason h);

/// Running minima of the a-priori bound margins, updated every accepted step.
/// Each entry is a margin: the corresponding inequality holds iff it is
/// nonnegative.
struct BoundTrack {
  double radius = 0.0;       ///< min over x>0 of r/x^{g/(N(g-1))} - E0^{-1/(N(g-1))}
  double interface_lo = 0.0; ///< min of a - E0^{-1/(N(g-1))}
  double interface_hi = 0.0; ///< min of 2 a0 - a, tracked while tau <= t1a
  double separation = 0.0;   ///< min over sampled node pairs of the r^N gap margin
  double envelope_lo = 0.0;  ///< min of rho/rho0 - 1/2, tracked while tau <= min(t1a,t1b)
  double envelope_hi = 0.0;  ///< min of 2 - rho/rho0, same window
};

struct Trajectory {
  std::vector<LagrangianState> snapshots;
  std::vector<DissipationTotals> dissipation;  ///< aligned with snapshots
  std::vector<MonitorSample> monitor_log;      ///< per-snapshot running maxima
  HaltReason halted_reason = HaltReason::None;
  double trip_tau = -1.0;
  std::string trip_what;

  double e0 = 0.0;  ///< initial energy of the run
  double t1a = 0.0, t1b = 0.0;
  double m0 = 0.0, m1 = 0.0;  ///< monitor bounds in effect
  BoundTrack bounds;
  double mass_defect_max = 0.0;  ///< max over steps of |sum cell masses - 1|
  double dtau_min = 0.0, dtau_max = 0.0;
  long steps = 0;

  const LagrangianState& front() const { return snapshots.front(); }
  const LagrangianState& back() const { return snapshots.back(); }
};

/// Explicit validity-horizon estimates derived from the monitor bounds:
/// t1a bounds the interface displacement, t1b additionally keeps the density
/// within a factor 2 of its initial profile.
struct HorizonEstimate {
  double t1a = 0.0;  ///< a0 / M1
  double t1b = 0.0;  ///< min(t1a, ln2 / (2 M1 E0^{1/(N(g-1))} x0^{-g/(N(g-1))} + 2 M0))
  double m0 = 0.0;   ///< stress monitor bound
  double m1 = 0.0;   ///< velocity monitor bound
};

}  // namespace fbns
