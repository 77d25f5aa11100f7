#pragma once

#include "fbns/params.hpp"
#include "fbns/state.hpp"

namespace fbns {

/// Interior cut points and the cutoff used for boundary-singular integrals.
struct RegionSpec {
  double x0 = 0.25;    ///< inner monitor cut
  double x2 = 0.5;     ///< boundary-region cut
  double x1 = 0.75;    ///< interior-region cut
  double x_cut = 0.9;  ///< end of the cutoff support
  double ramp = 0.05;  ///< cutoff ramp width

  void validate() const;  ///< throws unless 0 < x0 < x2 < x1 < 1 and x_cut < 1
};

/// Instantaneous values of the four dissipation integrands (prefactors
/// applied); time integration of these yields DissipationTotals.
struct DissipationRates {
  double grad_geom = 0.0;
  double grad_visc = 0.0;
  double div_flux = 0.0;
  double div_shear = 0.0;
};

/// Total energy int (u^2/2 + rho^{gamma-1}/(gamma-1)) dx. Velocity is
/// node-averaged to cells; the potential part integrates the fitted power
/// law over the vacuum cell.
double energy(const LagrangianState& s, const Params& p);

DissipationRates dissipation_increment(const LagrangianState& s,
                                       const Params& p);

/// Effective velocity v = u + r^{N-1} (rho^theta)_x at nodes, with one-sided
/// density gradients at the first and last node. For uniform density v == u.
Array bd_effective_velocity(const LagrangianState& s, const Params& p);

/// Cutoff-weighted int phi(x) ((rho^theta)_x r^{N-1})^2 dx over [0, x_cut].
double bd_entropy(const LagrangianState& s, const RegionSpec& region,
                  const Params& p);

/// Scale for the entropy bound: the same integral at time zero plus the
/// kinetic part and the full potential integral of the initial data.
double bd_entropy_budget(const LagrangianState& initial,
                         const RegionSpec& region, const Params& p);

/// int_{x2}^1 u^{2k} dx, 1 <= k <= 2m.
double velocity_moments(const LagrangianState& s, const RegionSpec& region,
                        const Params& p, int k);

/// Margins of the a-priori bounds; every inequality holds iff the margin is
/// nonnegative. rho0 is the initial cell density of the same run.
struct BoundMargins {
  double radius = 0.0;        ///< min_{x>0} r/x^{g/(N(g-1))} - e0^{-1/(N(g-1))}
  double interface_lo = 0.0;  ///< a - e0^{-1/(N(g-1))}
  double interface_hi = 0.0;  ///< 2 a0 - a
  double envelope_lo = 0.0;   ///< min rho/rho0 - 1/2
  double envelope_hi = 0.0;   ///< 2 - max rho/rho0
  double eulerian_lo = 0.0;   ///< min rho/(a-r)^sigma - rho_lo/2, reconstructed
  double eulerian_hi = 0.0;   ///< 2 rho_hi - max rho/(a-r)^sigma
  double separation = 0.0;    ///< min over node pairs of the r^N gap margin
};

BoundMargins bound_margins(const LagrangianState& s, const Array& rho0,
                           const Params& p, double e0);

/// Lagrangian total mass: the sum of cell widths.
double mass_lagrangian(const LagrangianState& s);

/// max over cells of |rho r^{N-1} u_x|.
double stress_monitor(const LagrangianState& s, const Params& p);

/// Scalar functionals of one snapshot, one row of the report table.
struct FunctionalReport {
  double tau = 0.0;
  double e = 0.0;
  DissipationTotals dissipation;
  double mass_lag = 0.0;
  double mass_eul = 0.0;
  double bd_entropy_value = 0.0;
  double bd_budget = 0.0;
  std::vector<double> moments;  ///< k = 1..2m
  BoundMargins margins;
  double stress_max = 0.0;
  double u_max = 0.0;
};

FunctionalReport functional_report(const LagrangianState& s,
                                   const DissipationTotals& totals,
                                   const Array& rho0, const Params& p,
                                   const RegionSpec& region, double e0);

}  // namespace fbns
