#pragma once

#include <functional>

#include "fbns/params.hpp"
#include "fbns/state.hpp"

namespace fbns {

/// Radial fields sampled on an increasing radius grid, for output and for
/// checks stated in the physical coordinates.
struct EulerianField {
  Array radii;  ///< increasing, radii[0]=0, radii[n-1]=a
  Array rho;    ///< nonnegative, 0 at r=a
  Array u;      ///< 0 at r=0
  double a = 0.0;
};

/// Cumulative mass fraction x(r) = int_0^r rho y^{N-1} dy for a radial
/// density profile given as a callable. Requires 0 <= r <= a0.
double mass_coordinate(double r, const std::function<double(double)>& rho_of_r,
                       const Params& p);

/// Node radii recovered from cell densities through
/// r^N(x) = N int_0^x rho^{-1} dy. The final cell, where 1/rho diverges like
/// an integrable power of 1-x, is integrated in closed form from the fitted
/// local power law.
Array node_radii_from_density(const MassGrid& g, const Array& rho_cells,
                              const Params& p);

/// Radius at an arbitrary mass fraction x in [0,1], interpolating the
/// cumulative map above linearly in r^N within cells (exactly consistent with
/// the midpoint cumulation) and by the fitted power law in the last cell.
double radius_from_mass(double x, const LagrangianState& s, const Params& p);

/// Samples (rho, u) on n_out uniformly spaced radii in [0, a] by monotone
/// piecewise-linear interpolation; endpoint values satisfy u(0)=0, rho(a)=0.
EulerianField to_eulerian(const LagrangianState& s, Index n_out);

/// Total mass recomputed in the physical coordinates,
/// int_0^a rho r^{N-1} dr, with a power-law closed form on the vacuum cell.
double eulerian_mass(const LagrangianState& s, const Params& p);

/// Least-squares slope of log rho against log(a - r) over reconstruction
/// samples with a - r in [0.01 a, 0.15 a]: the empirical vacuum rate.
double vacuum_rate_slope(const LagrangianState& s, const Params& p);

/// Adaptive Simpson quadrature of f over [a, b] to the given tolerance.
/// Utility shared by profile construction and test oracles.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

}  // namespace fbns
