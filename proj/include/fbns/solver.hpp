#pragma once

#include <optional>
#include <stdexcept>

#include "fbns/functionals.hpp"
#include "fbns/initial_data.hpp"
#include "fbns/params.hpp"
#include "fbns/state.hpp"

namespace fbns {

/// Thrown when a state stops being integrable (nonpositive interior density
/// or a folded radius map).
struct DegenerateState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time derivatives of the semi-discrete system on the staggered grid.
struct Rhs {
  Array drho;  ///< cells
  Array du;    ///< nodes, du[0] == 0
  Array dr;    ///< nodes
  double da = 0.0;
};

/// Spatial discretization of the Lagrangian system: density transport on
/// cells, the momentum balance on interior nodes and the interface node with
/// the vacuum side of the last node carrying zero pressure and stress flux,
/// and dr/dtau = u. The center node is Dirichlet (u = 0) and carries no
/// momentum equation.
Rhs semi_discrete_rhs(const LagrangianState& s, const Params& p);

/// Stable explicit step size: the viscous limit dx^2/(theta rho^{theta+1}
/// r^{2(N-1)}) combined with the acoustic limit dx/(rho^{(gamma-1)/2} r^{N-1}),
/// scaled by the safety factor.
double cfl_dtau(const LagrangianState& s, const Params& p,
                double safety = 0.4);

/// One two-stage strong-stability-preserving step. Returns nothing when the
/// stepped state is out of range (density nonpositive, radii folded); the
/// caller is expected to retry with a smaller dtau.
std::optional<LagrangianState> step(const LagrangianState& s, double dtau,
                                    const Params& p);

/// Monitor thresholds derived from the initial data:
///   M0 = 4 max|rho0 r0^{N-1} u0_x| + 1,  M1 = 4 max|u0| + sqrt(E0).
std::pair<double, double> default_monitor_bounds(const InitialData& d,
                                                 const Params& p);

/// Explicit validity horizons for monitor bounds (m0, m1) and inner cut x0.
HorizonEstimate horizon_estimates(const InitialData& d, const Params& p,
                                  double m0, double m1, double x0);

struct RunControl {
  double horizon = 0.0;   ///< final time; 0 keeps only the initial snapshot
  int snapshots = 64;     ///< number of output intervals over the horizon
  double safety = 0.4;    ///< CFL safety factor
};

/// Integrates the system until the horizon or a monitor trip, accumulating
/// the dissipation integrals with the same two-stage weights as the
/// integrator and tracking monitors and bound margins every accepted step.
Trajectory run(const InitialData& d, const Params& p,
               const HorizonEstimate& monitors, const RunControl& ctl);

/// Rebuilds the density from the time-quadrature of the logged contraction
/// rate rho (r^{N-1}u)_x and returns the maximum relative deviation from the
/// evolved density. Needs at least two snapshots.
double density_exponential_crosscheck(const Trajectory& traj,
                                      const Params& p);

}  // namespace fbns
