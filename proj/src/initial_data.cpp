#include "fbns/initial_data.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fbns {

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::PowerLaw: return "power_law";
    case ProfileKind::Uniform: return "uniform";
  }
  return "?";
}

namespace {

// int_0^h s^sigma (a-s)^{N-1} ds, exact for integer N: the mass in a shell
// of depth h below radius a for a unit-amplitude power-law density.
double shell_mass(double a, double h, double sigma, int n) {
  double acc = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= n - 1; ++i) {
    const double term = binom * std::pow(a, n - 1 - i) *
                        std::pow(h, sigma + 1 + i) / (sigma + 1 + i);
    acc += (i % 2 == 0 ? term : -term);
    binom = binom * (n - 1 - i) / (i + 1);
  }
  return acc;
}

// Solves shell_mass(a, s, sigma, n) = target for s in [0, a] by bisection.
double invert_shell_mass(double a, double target, double sigma, int n) {
  double lo = 0.0, hi = a;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shell_mass(a, mid, sigma, n) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double bump_shape(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return w * w * w;
}

Array evaluate_velocity(const VelocitySpec& v, const Array& x_nodes) {
  Array u = Array::Zero(x_nodes.size());
  if (v.kind == VelocityKind::Bump) {
    if (!(v.width > 0.0))
      throw std::invalid_argument("velocity bump needs positive width");
    for (Index j = 0; j < x_nodes.size(); ++j)
      u[j] = v.amplitude * bump_shape((x_nodes[j] - v.center) / v.width);
  }
  return u;
}

}  // namespace

LagrangianState InitialData::state() const {
  LagrangianState s;
  s.tau = 0.0;
  s.rho = rho0;
  s.u = u0;
  s.r = r0;
  s.a = r0[r0.size() - 1];
  s.grid = grid;
  return s;
}

double lagrangian_pinch_constant(double c, const Params& p) {
  const double s = p.sigma;
  return std::pow(c, 1.0 / (1.0 + s)) *
         std::pow((1.0 + s) / std::pow(p.a0, p.dim - 1), p.beta());
}

InitialData make_initial_data(const Params& p, const ProfileSpec& profile,
                              Index num_cells) {
  if (num_cells < 2)
    throw std::invalid_argument("make_initial_data: need at least 2 cells");
  auto grid = std::make_shared<const MassGrid>(MassGrid::uniform(num_cells));
  const Index m = num_cells;
  const int n = p.dim;

  InitialData d;
  d.grid = grid;
  d.a0 = p.a0;
  d.profile_kind = profile.kind;
  d.rho0.resize(m);
  d.r0.resize(m + 1);

  if (profile.kind == ProfileKind::Uniform) {
    d.amplitude = n / std::pow(p.a0, n);
    d.rho0.setConstant(d.amplitude);
    d.r0 = p.a0 * grid->nodes.pow(1.0 / n);
  } else {
    const double total = shell_mass(p.a0, p.a0, p.sigma, n);
    if (!(total > 0.0) || !std::isfinite(total))
      throw std::invalid_argument("profile has non-finite or zero mass");
    d.amplitude = 1.0 / total;  // K
    // 1 - x equals K * shell_mass(a0, a0 - r); invert per node and cell
    for (Index j = 0; j <= m; ++j) {
      const double s =
          invert_shell_mass(p.a0, (1.0 - grid->nodes[j]) * total, p.sigma, n);
      d.r0[j] = p.a0 - s;
    }
    d.r0[0] = 0.0;
    d.r0[m] = p.a0;
    for (Index c = 0; c < m; ++c) {
      const double s =
          invert_shell_mass(p.a0, (1.0 - grid->cells[c]) * total, p.sigma, n);
      d.rho0[c] = d.amplitude * std::pow(s, p.sigma);
    }
  }

  d.u0 = evaluate_velocity(profile.u0, grid->nodes);
  if (d.u0[0] != 0.0) {
    std::ostringstream msg;
    msg << "initial velocity must vanish at the center, got u0(0)="
        << d.u0[0];
    throw std::invalid_argument(msg.str());
  }

  d.normalized_mass = eulerian_mass(d.state(), p);
  return d;
}

VerificationReport validate_initial_data(const InitialData& d,
                                         const Params& p) {
  VerificationReport rep;
  const MassGrid& g = *d.grid;
  const Index m = g.num_cells();
  const double dx = g.widths.maxCoeff();

  auto bound_check = [&](const std::string& id, const std::string& what,
                         double worst_violation, const std::string& note) {
    CheckResult c;
    c.id = id;
    c.what = what;
    c.residual = worst_violation;
    c.tolerance = 0.0;
    c.status =
        worst_violation <= 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
    c.note = note;
    rep.add(c);
  };

  {
    CheckResult c;
    c.id = "data.center_velocity";
    c.what = "u0(0) = 0";
    c.residual = std::abs(d.u0[0]);
    c.tolerance = 0.0;
    c.status = c.residual == 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
    rep.add(c);
  }

  {
    const double mass = eulerian_mass(d.state(), p);
    CheckResult c;
    c.id = "data.mass";
    c.what = "radial mass integral = 1";
    c.residual = std::abs(mass - 1.0);
    c.tolerance = 1e-10 + 10.0 * dx * dx;
    c.status =
        c.residual <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    std::ostringstream note;
    note << "mass=" << mass;
    c.note = note.str();
    rep.add(c);
  }

  if (d.profile_kind == ProfileKind::Uniform) {
    CheckResult c;
    c.id = "data.pinch";
    c.what = "vacuum pinch bounds";
    c.status = CheckStatus::Pass;
    c.note = "skipped: transform-test profile";
    rep.add(c);
  } else {
    // radial form at cell-center radii
    double worst_r = 0.0;
    Index worst_r_cell = 0;
    const Array r_cell = node_to_cell_average(d.r0);
    for (Index c = 0; c < m; ++c) {
      const double env = std::pow(p.a0 - r_cell[c], p.sigma);
      const double lo = p.rho_star_lo * env - d.rho0[c];
      const double hi = d.rho0[c] - p.rho_star_hi * env;
      const double v = std::max(lo, hi);
      if (v > worst_r) {
        worst_r = v;
        worst_r_cell = c;
      }
    }
    std::ostringstream note_r;
    note_r << "worst cell " << worst_r_cell;
    bound_check("data.pinch_radial",
                "rho_lo (a0-r)^sigma <= rho0 <= rho_hi (a0-r)^sigma", worst_r,
                note_r.str());

    // mass-coordinate form with transported constants and factor-2 slack
    const double lo_c = 0.5 * lagrangian_pinch_constant(p.rho_star_lo, p);
    const double hi_c = 2.0 * lagrangian_pinch_constant(p.rho_star_hi, p);
    double worst_x = 0.0;
    Index worst_x_cell = 0;
    for (Index c = 0; c < m; ++c) {
      const double env = std::pow(1.0 - g.cells[c], p.beta());
      const double v =
          std::max(lo_c * env - d.rho0[c], d.rho0[c] - hi_c * env);
      if (v > worst_x) {
        worst_x = v;
        worst_x_cell = c;
      }
    }
    std::ostringstream note_x;
    note_x << "worst cell " << worst_x_cell;
    bound_check("data.pinch_mass_coordinate",
                "transported pinch bounds in (1-x)^beta form", worst_x,
                note_x.str());
  }

  {
    // weighted data integrals: finiteness only
    const double x2 = 0.5, x1 = 0.75;
    const Array r_cell = node_to_cell_average(d.r0);
    const Array rn1_cell = r_cell.pow(p.dim - 1);
    const Array u0x = ddx_nodes_to_cells(g, d.u0);
    const Array q = d.rho0.pow(1.0 + p.theta) * rn1_cell * u0x;
    const Array qx = ddx_cells_to_nodes(g, q);
    const Array& w = g.node_weights();

    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
    const Array rho_node = cell_to_node_average(d.rho0);
    const Array s_node = rho_node.sqrt() * d.r0.pow(p.dim - 1) * d.u0;
    const Array s_x = ddx_nodes_to_cells(g, s_node);
    for (Index j = 0; j <= m; ++j)
      if (g.nodes[j] >= x2) {
        b1 += w[j] * qx[j] * qx[j];
        b2 += w[j] * s_node[j] * s_node[j];
      }
    for (Index c = 0; c < m; ++c)
      if (g.cells[c] >= x2) b2 += g.widths[c] * s_x[c] * s_x[c];
    const Array u_cell = node_to_cell_average(d.u0);
    for (Index c = 0; c < m; ++c)
      if (g.cells[c] >= x2)
        b3 += g.widths[c] * std::pow(u_cell[c], 4.0 * p.m);

    // interior difference-quotient norms up to third order on [0, x1]
    const Array rho_x = ddx_cells_to_nodes(g, d.rho0);
    const Array rho_xx = ddx_nodes_to_cells(g, rho_x);
    const Array rho_xxx = ddx_cells_to_nodes(g, rho_xx);
    const Array u_x = ddx_nodes_to_cells(g, d.u0);
    const Array u_xx = ddx_cells_to_nodes(g, u_x);
    const Array u_xxx = ddx_nodes_to_cells(g, u_xx);
    for (Index c = 0; c < m; ++c)
      if (g.cells[c] <= x1)
        b4 += g.widths[c] *
              (rho_xx[c] * rho_xx[c] + u_x[c] * u_x[c] + u_xxx[c] * u_xxx[c]);
    for (Index j = 0; j <= m; ++j)
      if (g.nodes[j] <= x1)
        b4 += w[j] * (rho_x[j] * rho_x[j] + rho_xxx[j] * rho_xxx[j] +
                      u_xx[j] * u_xx[j]);

    const double e_like =
        cell_integral(g, node_to_cell_average(d.u0).square()) +
        cell_integral_vacuum_tail(g, d.rho0.pow(p.gamma - 1.0));

    const bool finite = std::isfinite(b1) && std::isfinite(b2) &&
                        std::isfinite(b3) && std::isfinite(b4) &&
                        std::isfinite(e_like);
    CheckResult c;
    c.id = "data.weighted_integrals";
    c.what = "weighted data integrals are finite";
    c.residual = finite ? 0.0 : 1.0;
    c.tolerance = 0.0;
    c.status = finite ? CheckStatus::Pass : CheckStatus::Fail;
    std::ostringstream note;
    note << "stress_flux=" << b1 << " momentum_h1=" << b2 << " u_moment=" << b3
         << " interior_h3=" << b4 << " energy=" << e_like;
    c.note = note.str();
    rep.add(c);
  }

  return rep;
}

}  // namespace fbns
