#include "fbns/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbns/coords.hpp"

namespace fbns {

void RegionSpec::validate() const {
  if (!(0.0 < x0 && x0 < x2 && x2 < x1 && x1 < 1.0))
    throw std::invalid_argument("region cuts must satisfy 0 < x0 < x2 < x1 < 1");
  if (!(x_cut < 1.0 && x_cut > 0.0))
    throw std::invalid_argument("region x_cut must lie in (0,1)");
  if (!(ramp > 0.0 && ramp <= x_cut))
    throw std::invalid_argument("region ramp must lie in (0, x_cut]");
}

double energy(const LagrangianState& s, const Params& p) {
  const MassGrid& g = s.g();
  const Array u_cell = node_to_cell_average(s.u);
  const double kinetic = 0.5 * cell_integral(g, u_cell.square());
  const double potential =
      cell_integral_vacuum_tail(g, pow_array(s.rho, p.gamma - 1.0)) /
      (p.gamma - 1.0);
  return kinetic + potential;
}

namespace {

// u/r at cells, well defined at the center cell where both vanish
Array u_over_r_cells(const LagrangianState& s) {
  const Index m = s.num_cells();
  return (s.u.head(m) + s.u.tail(m)) / (s.r.head(m) + s.r.tail(m));
}

}  // namespace

DissipationRates dissipation_increment(const LagrangianState& s,
                                       const Params& p) {
  const MassGrid& g = s.g();
  const double n = p.dim;
  const double pre_grad = 1.0 - n * (1.0 - p.theta);

  const Array rn1_node = pow_array(s.r, n - 1.0);
  const Array flux = ddx_nodes_to_cells(g, (rn1_node * s.u).eval());
  const Array ux = ddx_nodes_to_cells(g, s.u);
  const Array rn1_cell = pow_array(node_to_cell_average(s.r), n - 1.0);
  const Array uor = u_over_r_cells(s);
  const Array grad = rn1_cell * ux;  // r^{N-1} u_x at cells

  DissipationRates rates;
  rates.grad_geom = pre_grad * (n - 1.0) *
                    cell_integral(g, pow_array(s.rho, p.theta - 1.0) *
                                         uor.square());
  rates.grad_visc =
      pre_grad * cell_integral(g, pow_array(s.rho, 1.0 + p.theta) *
                                      grad.square());
  const Array rho_th1 = pow_array(s.rho, p.theta + 1.0);
  rates.div_flux =
      (p.theta - 1.0 + 1.0 / n) * cell_integral(g, rho_th1 * flux.square());
  rates.div_shear =
      (n - 1.0) / n *
      cell_integral(g, rho_th1 * (grad - uor / s.rho).square());
  return rates;
}

Array bd_effective_velocity(const LagrangianState& s, const Params& p) {
  const Array gth = ddx_cells_to_nodes(s.g(), pow_array(s.rho, p.theta));
  return s.u + pow_array(s.r, p.dim - 1.0) * gth;
}

namespace {

Array bd_entropy_integrand(const LagrangianState& s, const Params& p) {
  const Array gth = ddx_cells_to_nodes(s.g(), pow_array(s.rho, p.theta));
  return (pow_array(s.r, p.dim - 1.0) * gth).square();
}

}  // namespace

double bd_entropy(const LagrangianState& s, const RegionSpec& region,
                  const Params& p) {
  if (!(region.x_cut < 1.0))
    throw std::invalid_argument("bd_entropy: x_cut must be < 1");
  const MassGrid& g = s.g();
  const Array f = bd_entropy_integrand(s, p);
  const Array& w = g.node_weights();
  double acc = 0.0;
  for (Index j = 0; j < g.num_nodes(); ++j)
    acc += w[j] * cutoff_weight(g.nodes[j], region.x_cut, region.ramp) * f[j];
  return acc;
}

double bd_entropy_budget(const LagrangianState& initial,
                         const RegionSpec& region, const Params& p) {
  const MassGrid& g = initial.g();
  const Array f = bd_entropy_integrand(initial, p);
  const Array& w = g.node_weights();
  double acc = 0.0;
  for (Index j = 0; j < g.num_nodes(); ++j)
    if (g.nodes[j] <= region.x_cut) acc += w[j] * f[j];
  acc += cell_integral(g, node_to_cell_average(initial.u).square(), 0.0,
                       region.x_cut);
  acc += cell_integral_vacuum_tail(g, pow_array(initial.rho, p.gamma - 1.0));
  return acc;
}

double velocity_moments(const LagrangianState& s, const RegionSpec& region,
                        const Params& p, int k) {
  if (k < 1 || k > 2 * p.m)
    throw std::invalid_argument("velocity_moments: k outside [1, 2m]");
  const Array u_cell = node_to_cell_average(s.u);
  return cell_integral(s.g(), pow_array(u_cell, 2.0 * k), region.x2, 1.0);
}

double mass_lagrangian(const LagrangianState& s) {
  return s.g().widths.sum();
}

double stress_monitor(const LagrangianState& s, const Params& p) {
  const Array ux = ddx_nodes_to_cells(s.g(), s.u);
  const Array rn1_cell = pow_array(node_to_cell_average(s.r), p.dim - 1.0);
  return (s.rho * rn1_cell * ux).abs().maxCoeff();
}

BoundMargins bound_margins(const LagrangianState& s, const Array& rho0,
                           const Params& p, double e0) {
  const MassGrid& g = s.g();
  const Index m = s.num_cells();
  const double n = p.dim;
  const double q = p.gamma / (n * (p.gamma - 1.0));
  const double radius_const = std::pow(e0, -1.0 / (n * (p.gamma - 1.0)));

  BoundMargins out;
  out.radius = std::numeric_limits<double>::infinity();
  for (Index j = 1; j <= m; ++j)
    out.radius = std::min(out.radius,
                          s.r[j] / std::pow(g.nodes[j], q) - radius_const);
  out.interface_lo = s.a - radius_const;
  out.interface_hi = 2.0 * p.a0 - s.a;

  const Array ratio = s.rho / rho0;
  out.envelope_lo = ratio.minCoeff() - 0.5;
  out.envelope_hi = 2.0 - ratio.maxCoeff();

  // reconstructed radial envelope, evaluated inside the covered region
  // (the interpolant is linear on the final knot interval while the field
  // decays like a fractional power, so that interval is excluded)
  {
    const EulerianField f = to_eulerian(s, 2 * m);
    const double r_last_knot = 0.5 * (s.r[m - 1] + s.r[m]);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Index i = 0; i < f.radii.size(); ++i) {
      if (f.radii[i] > r_last_knot) break;
      const double env = std::pow(s.a - f.radii[i], p.sigma);
      const double v = f.rho[i] / env;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.eulerian_lo = lo - 0.5 * p.rho_star_lo;
    out.eulerian_hi = 2.0 * p.rho_star_hi - hi;
  }

  // pairwise r^N gap bound
  const double q2 = p.gamma / (p.gamma - 1.0);
  const double sep_const = std::pow(e0, -1.0 / (p.gamma - 1.0));
  const Array rn = pow_array(s.r, n);
  out.separation = std::numeric_limits<double>::infinity();
  for (Index j = 1; j <= m; ++j)
    for (Index i = 0; i < j; ++i) {
      const double margin = (rn[j] - rn[i]) /
                                std::pow(g.nodes[j] - g.nodes[i], q2) -
                            sep_const;
      out.separation = std::min(out.separation, margin);
    }
  return out;
}

FunctionalReport functional_report(const LagrangianState& s,
                                   const DissipationTotals& totals,
                                   const Array& rho0, const Params& p,
                                   const RegionSpec& region, double e0) {
  FunctionalReport rep;
  rep.tau = s.tau;
  rep.e = energy(s, p);
  rep.dissipation = totals;
  rep.mass_lag = mass_lagrangian(s);
  rep.mass_eul = eulerian_mass(s, p);
  rep.bd_entropy_value = bd_entropy(s, region, p);
  rep.moments.resize(2 * p.m);
  for (int k = 1; k <= 2 * p.m; ++k)
    rep.moments[k - 1] = velocity_moments(s, region, p, k);
  rep.margins = bound_margins(s, rho0, p, e0);
  rep.stress_max = stress_monitor(s, p);
  rep.u_max = s.u.abs().maxCoeff();
  return rep;
}

}  // namespace fbns
