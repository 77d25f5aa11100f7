#include "fbns/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fbns/coords.hpp"

namespace fbns {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return w * w * w;
}

double bump_d(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return -6.0 * s * w * w;
}

CheckResult residual_check(const std::string& id, const std::string& what,
                           double residual, double tolerance) {
  CheckResult c;
  c.id = id;
  c.what = what;
  c.residual = residual;
  c.tolerance = tolerance;
  c.status = residual <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  return c;
}

CheckResult margin_check(const std::string& id, const std::string& what,
                         double margin) {
  CheckResult c;
  c.id = id;
  c.what = what;
  c.residual = -margin;  // violation size; negative residual means slack
  c.tolerance = 0.0;
  c.status = margin >= 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
  std::ostringstream note;
  note << "margin=" << margin;
  c.note = note.str();
  return c;
}

double max_snapshot_gap(const Trajectory& traj) {
  double gap = 0.0;
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k)
    gap = std::max(gap,
                   traj.snapshots[k].tau - traj.snapshots[k - 1].tau);
  return gap;
}

double grid_dx(const Trajectory& traj) {
  return traj.front().g().widths.maxCoeff();
}

// evolved radius of the particle path at mass fraction x
double radius_at_mass(const LagrangianState& s, double x) {
  const MassGrid& g = s.g();
  const Index m = g.num_cells();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return s.a;
  Index lo = 0, hi = m;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    (g.nodes[mid] <= x ? lo : hi) = mid;
  }
  const double t = (x - g.nodes[lo]) / (g.nodes[lo + 1] - g.nodes[lo]);
  return s.r[lo] + t * (s.r[lo + 1] - s.r[lo]);
}

}  // namespace

double SpaceTimeBump::value(double r, double t) const {
  return bump((r - rc) / rw) * bump((t - tc) / tw);
}

double SpaceTimeBump::dr(double r, double t) const {
  return bump_d((r - rc) / rw) / rw * bump((t - tc) / tw);
}

double SpaceTimeBump::dt(double r, double t) const {
  return bump((r - rc) / rw) * bump_d((t - tc) / tw) / tw;
}

TestFunctionFamily TestFunctionFamily::standard(const Trajectory& traj) {
  double a_min = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.snapshots) a_min = std::min(a_min, s.a);
  const double rl = 0.95 * a_min;
  const double t0 = traj.front().tau;
  const double tt = std::max(traj.back().tau - t0, 1e-300);

  TestFunctionFamily fam;
  const double spatial[3][2] = {{0.25, 0.2}, {0.5, 0.3}, {0.75, 0.2}};
  const double temporal[2][2] = {{0.2, 0.35}, {0.55, 0.35}};
  for (const auto& sp : spatial)
    for (const auto& tp : temporal) {
      SpaceTimeBump b;
      b.rc = sp[0] * rl;
      b.rw = sp[1] * rl;
      b.tc = t0 + tp[0] * tt;
      b.tw = tp[1] * tt;
      fam.members.push_back(b);
    }
  return fam;
}

std::vector<CheckResult> check_energy_identity(const Trajectory& traj,
                                               const Params& p,
                                               const ToleranceModel& tol) {
  const double e0 = energy(traj.front(), p);
  double res_grad = 0.0, res_div = 0.0, res_sum = 0.0;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const double e = energy(traj.snapshots[k], p);
    const DissipationTotals& d = traj.dissipation[k];
    res_grad = std::max(res_grad, std::abs(e + d.total_grad() - e0));
    res_div = std::max(res_div, std::abs(e + d.total_div() - e0));
    res_sum = std::max(
        res_sum, std::abs(d.total_grad() - d.total_div()) -
                     (std::abs(e + d.total_grad() - e0) +
                      std::abs(e + d.total_div() - e0)));
  }
  res_sum = std::max(res_sum, 0.0);
  const double t = tol.identity(grid_dx(traj), traj.dtau_max);
  std::vector<CheckResult> out;
  out.push_back(residual_check("energy.identity_grad",
                               "E + D(gradient split) - E0", res_grad, t));
  out.push_back(residual_check("energy.identity_div",
                               "E + D(divergence split) - E0", res_div, t));
  out.push_back(residual_check(
      "energy.consistency",
      "|D_grad - D_div| within the sum of identity residuals",
      res_sum, 0.0));
  return out;
}

std::vector<CheckResult> check_mass(const Trajectory& traj, const Params& p,
                                    const ToleranceModel& tol) {
  double eul = 0.0;
  for (const auto& s : traj.snapshots)
    eul = std::max(eul, std::abs(eulerian_mass(s, p) - 1.0));
  std::vector<CheckResult> out;
  out.push_back(residual_check("mass.lagrangian",
                               "sum of cell masses stays 1",
                               traj.mass_defect_max, 1e-14));
  const double dx = grid_dx(traj);
  out.push_back(residual_check("mass.eulerian",
                               "radial mass recomputation stays 1", eul,
                               tol.identity(dx, traj.dtau_max)));
  return out;
}

std::vector<CheckResult> check_radius_bounds(const Trajectory& traj,
                                             const Params& p) {
  std::vector<CheckResult> out;
  out.push_back(margin_check("bounds.radius",
                             "r >= E0^{-1/(N(g-1))} x^{g/(N(g-1))}",
                             traj.bounds.radius));
  out.push_back(margin_check("bounds.interface_lo",
                             "a >= E0^{-1/(N(g-1))}",
                             traj.bounds.interface_lo));
  out.push_back(margin_check("bounds.interface_hi", "a <= 2 a0 up to t1a",
                             traj.bounds.interface_hi));

  // pairwise gap bound over all node pairs at snapshot times; adjacent and
  // end-anchored pairs are additionally tracked every step inside run()
  double sep = traj.bounds.separation;
  const Array& rho0 = traj.front().rho;
  for (const auto& s : traj.snapshots)
    sep = std::min(sep,
                   bound_margins(s, rho0, p, traj.e0).separation);
  out.push_back(margin_check("bounds.separation",
                             "r^N gaps dominate mass gaps", sep));
  return out;
}

std::vector<CheckResult> check_envelopes(const Trajectory& traj,
                                         const Params& p) {
  std::vector<CheckResult> out;
  const double window =
      traj.halted_reason == HaltReason::MonitorTrip
          ? std::min(traj.trip_tau, std::min(traj.t1a, traj.t1b))
          : std::min(traj.t1a, traj.t1b);

  // within the monitored horizon: per-step tracked minima
  const double in_margin =
      std::min(traj.bounds.envelope_lo, traj.bounds.envelope_hi);
  out.push_back(margin_check("envelope.mass_ratio",
                             "rho/rho0 in [1/2, 2] up to min(t1a,t1b)",
                             in_margin));

  // past the horizon: violations are out of regime, not failures
  const Array& rho0 = traj.front().rho;
  double post_margin = std::numeric_limits<double>::infinity();
  bool any_post = false;
  double eul_margin = std::numeric_limits<double>::infinity();
  double slope_dev = 0.0;
  for (const auto& s : traj.snapshots) {
    const BoundMargins m = bound_margins(s, rho0, p, traj.e0);
    if (s.tau > window) {
      any_post = true;
      post_margin =
          std::min(post_margin, std::min(m.envelope_lo, m.envelope_hi));
    } else {
      eul_margin =
          std::min(eul_margin, std::min(m.eulerian_lo, m.eulerian_hi));
      slope_dev = std::max(
          slope_dev, std::abs(vacuum_rate_slope(s, p) - p.sigma));
    }
  }
  if (any_post) {
    CheckResult c = margin_check("envelope.after_horizon",
                                 "rho/rho0 window past min(t1a,t1b)",
                                 post_margin);
    if (c.status == CheckStatus::Fail) {
      c.status = CheckStatus::Inconclusive;
      c.note += " (fail-after-horizon)";
    }
    out.push_back(c);
  }
  out.push_back(margin_check("envelope.radial",
                             "reconstructed rho within rho_pm (a-r)^sigma",
                             eul_margin));
  out.push_back(residual_check("envelope.vacuum_slope",
                               "fitted vacuum rate matches sigma", slope_dev,
                               0.05));
  return out;
}

namespace {

struct SnapshotQuadrature {
  Array r_cell, u_cell, ux, div_u, u_r;  // cells
  double tau = 0.0;
};

SnapshotQuadrature cell_data(const LagrangianState& s, const Params& p) {
  SnapshotQuadrature q;
  q.tau = s.tau;
  q.r_cell = node_to_cell_average(s.r);
  q.u_cell = node_to_cell_average(s.u);
  q.ux = ddx_nodes_to_cells(s.g(), s.u);
  const Array rn1_node = pow_array(s.r, p.dim - 1.0);
  q.div_u = s.rho * ddx_nodes_to_cells(s.g(), (rn1_node * s.u).eval());
  q.u_r = s.rho * pow_array(q.r_cell, p.dim - 1.0) * q.ux;
  return q;
}

}  // namespace

std::vector<CheckResult> check_weak_form(const Trajectory& traj,
                                         const TestFunctionFamily& fam,
                                         const Params& p,
                                         const ToleranceModel& tol) {
  const MassGrid& g = traj.front().g();
  const std::size_t ns = traj.snapshots.size();
  if (ns < 2)
    throw std::invalid_argument("check_weak_form: need at least two snapshots");

  std::vector<SnapshotQuadrature> q;
  q.reserve(ns);
  for (const auto& s : traj.snapshots) q.push_back(cell_data(s, p));

  const double n = p.dim;
  double res_cont = 0.0, res_mom = 0.0;

  for (const SpaceTimeBump& b : fam.members) {
    // continuity: [int phi dx] - int int (phi_t + u phi_r) dx dt = 0
    auto phi_mass = [&](const SnapshotQuadrature& sq) {
      Array v(sq.r_cell.size());
      for (Index c = 0; c < v.size(); ++c)
        v[c] = b.value(sq.r_cell[c], sq.tau);
      return cell_integral(g, v);
    };
    auto phi_transport = [&](const SnapshotQuadrature& sq) {
      Array v(sq.r_cell.size());
      for (Index c = 0; c < v.size(); ++c)
        v[c] = b.dt(sq.r_cell[c], sq.tau) +
               sq.u_cell[c] * b.dr(sq.r_cell[c], sq.tau);
      return cell_integral(g, v);
    };
    double transport = 0.0;
    for (std::size_t k = 1; k < ns; ++k)
      transport += 0.5 * (q[k].tau - q[k - 1].tau) *
                   (phi_transport(q[k]) + phi_transport(q[k - 1]));
    res_cont = std::max(
        res_cont,
        std::abs(phi_mass(q[ns - 1]) - phi_mass(q[0]) - transport));

    // momentum: data term + pressure + viscous + transport terms
    auto momentum_integrand = [&](std::size_t k) {
      const SnapshotQuadrature& sq = q[k];
      const LagrangianState& s = traj.snapshots[k];
      double acc = 0.0;
      for (Index c = 0; c < sq.r_cell.size(); ++c) {
        const double r = sq.r_cell[c];
        const double psi = b.value(r, sq.tau);
        const double psir = b.dr(r, sq.tau);
        const double psit = b.dt(r, sq.tau);
        const double div_psi = psir + (n - 1.0) * psi / r;
        const double rho = s.rho[c];
        double term = std::pow(rho, p.gamma - 1.0) * div_psi;
        term -= (p.theta - 1.0) * std::pow(rho, p.theta - 1.0) *
                sq.div_u[c] * div_psi;
        term -= std::pow(rho, p.theta - 1.0) *
                (sq.u_r[c] * psir + (n - 1.0) * sq.u_cell[c] * psi / (r * r));
        term += sq.u_cell[c] * psit + sq.u_cell[c] * sq.u_cell[c] * psir;
        acc += g.widths[c] * term;
      }
      return acc;
    };
    double momentum = 0.0;
    for (std::size_t k = 1; k < ns; ++k)
      momentum += 0.5 * (q[k].tau - q[k - 1].tau) *
                  (momentum_integrand(k) + momentum_integrand(k - 1));
    // initial-momentum data term
    double data_term = 0.0;
    for (Index c = 0; c < q[0].r_cell.size(); ++c)
      data_term += g.widths[c] * q[0].u_cell[c] *
                   b.value(q[0].r_cell[c], q[0].tau);
    res_mom = std::max(res_mom, std::abs(data_term + momentum));
  }

  // constant test function: the continuity residual collapses to the
  // Lagrangian mass defect between the endpoints
  const double const_phi_residual =
      std::abs(mass_lagrangian(traj.back()) - mass_lagrangian(traj.front()));
  const double mass_defect = std::abs(mass_lagrangian(traj.back()) -
                                      mass_lagrangian(traj.front()));

  const double dx = grid_dx(traj);
  const double dts = max_snapshot_gap(traj);
  std::vector<CheckResult> out;
  out.push_back(residual_check("weakform.continuity",
                               "distributional continuity residual", res_cont,
                               tol.first_order(dx, dts)));
  out.push_back(residual_check("weakform.momentum",
                               "distributional momentum residual", res_mom,
                               tol.first_order(dx, dts)));
  CheckResult c = residual_check("weakform.constant_phi",
                                 "constant test function equals mass defect",
                                 std::abs(const_phi_residual - mass_defect),
                                 0.0);
  out.push_back(c);
  return out;
}

CheckResult check_bd_residual(const Trajectory& traj, const Params& p,
                              const RegionSpec& region,
                              const ToleranceModel& tol) {
  const MassGrid& g = traj.front().g();
  const std::size_t ns = traj.snapshots.size();
  if (ns < 2)
    throw std::invalid_argument("check_bd_residual: need two snapshots");

  auto pressure_gradient = [&](const LagrangianState& s) -> Array {
    return ddx_cells_to_nodes(g, pow_array(s.rho, p.gamma)) *
           pow_array(s.r, p.dim - 1.0);
  };

  double worst = 0.0;
  Array v_prev = bd_effective_velocity(traj.snapshots[0], p);
  Array g_prev = pressure_gradient(traj.snapshots[0]);
  for (std::size_t k = 1; k < ns; ++k) {
    const Array v = bd_effective_velocity(traj.snapshots[k], p);
    const Array gp = pressure_gradient(traj.snapshots[k]);
    const double dt = traj.snapshots[k].tau - traj.snapshots[k - 1].tau;
    for (Index j = 0; j < g.num_nodes(); ++j) {
      if (g.nodes[j] > region.x_cut) break;
      const double res =
          (v[j] - v_prev[j]) / dt + 0.5 * (gp[j] + g_prev[j]);
      worst = std::max(worst, std::abs(res));
    }
    v_prev = v;
    g_prev = gp;
  }
  return residual_check("bd.residual",
                        "effective-velocity transport residual", worst,
                        tol.first_order(grid_dx(traj),
                                        max_snapshot_gap(traj)));
}

std::vector<CheckResult> check_moments(const Trajectory& traj, const Params& p,
                                       const RegionSpec& region) {
  const int kmax = 2 * p.m;
  double bound_violation = 0.0;
  double convexity_violation = 0.0;
  for (const auto& s : traj.snapshots) {
    std::vector<double> mom(kmax + 1);
    for (int k = 1; k <= kmax; ++k)
      mom[k] = velocity_moments(s, region, p, k);
    for (int k = 1; k <= kmax; ++k) {
      const double cap = std::pow(traj.m1, 2.0 * k) * (1.0 - region.x2) *
                             (1.0 + 1e-12) +
                         1e-300;
      bound_violation = std::max(bound_violation, mom[k] - cap);
    }
    for (int k = 2; k + 1 <= kmax; ++k) {
      const double lhs = mom[k] * mom[k];
      const double rhs = mom[k - 1] * mom[k + 1];
      convexity_violation =
          std::max(convexity_violation, lhs - rhs - 1e-12 * (1.0 + lhs));
    }
  }
  std::vector<CheckResult> out;
  out.push_back(residual_check("moments.bounded",
                               "velocity moments below the monitor cap",
                               std::max(bound_violation, 0.0), 0.0));
  out.push_back(residual_check("moments.log_convexity",
                               "Cauchy-Schwarz chain across moment orders",
                               std::max(convexity_violation, 0.0), 0.0));
  return out;
}

SeparationFunctional separation_functional(const LagrangianState& s1,
                                           const LagrangianState& s2,
                                           double x_cut, const Params& p) {
  if (s1.num_cells() != s2.num_cells())
    throw std::invalid_argument("separation_functional: mismatched grids");
  const MassGrid& g = s1.g();
  SeparationFunctional f;
  const Array omega = s1.u - s2.u;
  f.omega2 = cell_integral(g, node_to_cell_average(omega).square());
  const Array ratio = node_to_cell_average((s1.r / s2.r).eval());
  // r1/r2 at the center node is 0/0; cells use node averages away from it
  Array ratio_fixed = ratio;
  ratio_fixed[0] = (s1.r[1] / s2.r[1]);
  f.r2w = cell_integral(g, pow_array(s1.rho, p.theta - 1.0) *
                               (ratio_fixed - 1.0).square());
  const Array drho = s1.rho - s2.rho;
  f.rho2w = cell_integral(g, pow_array(s1.rho, p.theta - 3.0) * drho.square(),
                          0.0, x_cut);
  return f;
}

ContractionReport uniqueness_contraction(const Trajectory& t1,
                                         const Trajectory& t2, double x_cut,
                                         const Params& p, double floor) {
  if (t1.snapshots.size() != t2.snapshots.size())
    throw std::invalid_argument("uniqueness_contraction: snapshot counts differ");
  ContractionReport rep;
  rep.floor = floor;
  for (std::size_t k = 0; k < t1.snapshots.size(); ++k) {
    const auto& a = t1.snapshots[k];
    const auto& b = t2.snapshots[k];
    if (a.tau != b.tau)
      throw std::invalid_argument("uniqueness_contraction: snapshot times differ");
    rep.taus.push_back(a.tau);
    rep.series.push_back(separation_functional(a, b, x_cut, p));
  }

  const double g0 = rep.series.front().g();
  // least-squares slope of log G over snapshots above the floor
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (std::size_t k = 1; k < rep.series.size(); ++k) {
    const double gk = rep.series[k].g();
    if (gk <= floor || g0 <= 0.0) continue;
    const double x = rep.taus[k] - rep.taus[0];
    const double y = std::log(gk);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }

  CheckResult c;
  c.id = "uniqueness.contraction";
  c.what = "G(tau) <= G(0) exp(C tau) + floor";
  if (cnt < 2 || g0 <= floor) {
    // identical runs: G should vanish identically
    double gmax = 0.0;
    for (const auto& f : rep.series) gmax = std::max(gmax, f.g());
    rep.c_fit = 0.0;
    c.residual = gmax;
    c.tolerance = floor;
    c.status = gmax <= floor ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    rep.c_fit = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double intercept = (sy - rep.c_fit * sx) / cnt;
    double scatter = 0.0;
    for (std::size_t k = 1; k < rep.series.size(); ++k) {
      const double gk = rep.series[k].g();
      if (gk <= floor) continue;
      const double x = rep.taus[k] - rep.taus[0];
      scatter = std::max(scatter,
                         std::log(gk) - (intercept + rep.c_fit * x));
    }
    rep.log_slack = scatter;
    double violation = 0.0;
    for (std::size_t k = 0; k < rep.series.size(); ++k) {
      const double x = rep.taus[k] - rep.taus[0];
      const double envelope =
          g0 * std::exp(rep.c_fit * x + rep.log_slack) + floor;
      violation = std::max(violation, rep.series[k].g() - envelope);
    }
    c.residual = violation;
    c.tolerance = 0.0;
    c.status = (std::isfinite(rep.c_fit) && violation <= 0.0)
                   ? CheckStatus::Pass
                   : CheckStatus::Fail;
    std::ostringstream note;
    note << "C=" << rep.c_fit << " slack=" << rep.log_slack;
    c.note = note.str();
  }
  rep.check = c;
  return rep;
}

std::pair<double, double> lambda0_interval(const Params& p) {
  const double b = p.beta();
  const double hi = std::min(4.0 * p.m / (4.0 * p.m * b + 1.0),
                             1.0 / (b * (p.theta + 1.0)));
  return {1.0, hi};
}

namespace {

// radial difference-quotient norms of (rho, u) up to third order on [0, r_in]
std::array<double, 3> interior_norms(const LagrangianState& s,
                                     const Params& p, double r_in) {
  const Index n_samples = 2 * s.num_cells();
  const EulerianField f = to_eulerian(s, n_samples);
  const double dr = f.radii[1] - f.radii[0];
  std::array<double, 3> norms{0.0, 0.0, 0.0};
  Array rho = f.rho, u = f.u;
  for (int order = 1; order <= 3; ++order) {
    Array drho(rho.size() - 1), du(u.size() - 1);
    for (Index i = 0; i + 1 < rho.size(); ++i) {
      drho[i] = (rho[i + 1] - rho[i]) / dr;
      du[i] = (u[i + 1] - u[i]) / dr;
    }
    rho = drho;
    u = du;
    double acc = 0.0;
    for (Index i = 0; i < rho.size(); ++i) {
      const double r = f.radii[i] + 0.5 * order * dr;
      if (r > r_in) break;
      acc += dr * (rho[i] * rho[i] + u[i] * u[i]) * std::pow(r, p.dim - 1);
    }
    norms[order - 1] = acc;
  }
  return norms;
}

}  // namespace

std::vector<CheckResult> regularity_monitor(const Trajectory& traj,
                                            const RegionSpec& region,
                                            const Params& p,
                                            std::optional<double> lambda0,
                                            double cap_factor) {
  const auto [lam_lo, lam_hi] = lambda0_interval(p);
  double lam = lambda0 ? *lambda0 : 0.5 * (lam_lo + lam_hi);
  if (!(lam > lam_lo && lam < lam_hi))
    throw std::invalid_argument("regularity_monitor: lambda0 outside its interval");

  const MassGrid& g = traj.front().g();
  const double n = p.dim;

  // snapshot functional: {visc accumulation rate, interior H1..H3, boundary
  // quadratic, u_x integrability, quartic stress}
  struct Values {
    double visc_rate, h1, h2, h3, boundary, ux_lam, quartic;
  };
  auto eval = [&](const LagrangianState& s) -> Values {
    Values v{};
    const Array ux = ddx_nodes_to_cells(g, s.u);
    const Array r_cell = node_to_cell_average(s.r);
    const Array rn1_cell = pow_array(r_cell, n - 1.0);
    const Array u_cell = node_to_cell_average(s.u);
    const Array u_r = s.rho * rn1_cell * ux;
    const Array uor = u_cell / r_cell;
    v.visc_rate = cell_integral(
        g, pow_array(s.rho, p.theta - 1.0) *
               (u_r.square() + (n - 1.0) * uor.square()));

    const double r_in = radius_at_mass(s, region.x1);
    const auto h = interior_norms(s, p, r_in);
    v.h1 = h[0];
    v.h2 = h[1];
    v.h3 = h[2];

    const Rhs rhs = semi_discrete_rhs(s, p);
    const Array ut_cell = node_to_cell_average(rhs.du);
    const Array boundary_integrand =
        pow_array(s.rho, p.theta + 1.0) * ux.square() +
        pow_array(s.rho, p.theta - 1.0) * u_cell.square() +
        ut_cell.square();
    v.boundary = cell_integral(g, boundary_integrand, region.x2, 1.0);
    v.ux_lam = cell_integral(g, ux.abs().pow(lam), region.x2, 1.0);
    const double quartic = cell_integral(
        g, pow_array(s.rho, p.theta + 3.0) * ux.square().square(),
        region.x2, 1.0);
    v.quartic = quartic / (1.0 + v.boundary * v.boundary);
    return v;
  };

  const Values v0 = eval(traj.front());
  Values vmax = v0;
  for (const auto& s : traj.snapshots) {
    const Values v = eval(s);
    vmax.visc_rate = std::max(vmax.visc_rate, v.visc_rate);
    vmax.h1 = std::max(vmax.h1, v.h1);
    vmax.h2 = std::max(vmax.h2, v.h2);
    vmax.h3 = std::max(vmax.h3, v.h3);
    vmax.boundary = std::max(vmax.boundary, v.boundary);
    vmax.ux_lam = std::max(vmax.ux_lam, v.ux_lam);
    vmax.quartic = std::max(vmax.quartic, v.quartic);
  }

  auto monitor = [&](const std::string& id, const std::string& what,
                     double worst, double initial) {
    return residual_check(id, what, worst,
                          cap_factor * (initial + 1.0));
  };

  std::vector<CheckResult> out;
  out.push_back(monitor("regularity.viscous_rate",
                        "weighted velocity-gradient integral", vmax.visc_rate,
                        v0.visc_rate));
  out.push_back(monitor("regularity.interior_h1", "first radial differences",
                        vmax.h1, v0.h1));
  out.push_back(monitor("regularity.interior_h2", "second radial differences",
                        vmax.h2, v0.h2));
  out.push_back(monitor("regularity.interior_h3", "third radial differences",
                        vmax.h3, v0.h3));
  out.push_back(monitor("regularity.boundary",
                        "boundary-region quadratic integrals", vmax.boundary,
                        v0.boundary));
  out.push_back(monitor("regularity.ux_integrability",
                        "boundary u_x integrability", vmax.ux_lam, v0.ux_lam));
  out.push_back(monitor("regularity.quartic_ratio",
                        "quartic stress against quadratic budget",
                        vmax.quartic, v0.quartic));
  return out;
}

double fit_order(const std::vector<double>& dx,
                 const std::vector<double>& residuals) {
  if (dx.size() != residuals.size() || dx.size() < 2)
    throw std::invalid_argument("fit_order: need matching series, length >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long n = static_cast<long>(dx.size());
  for (std::size_t i = 0; i < dx.size(); ++i) {
    const double x = std::log(dx[i]);
    const double y = std::log(std::max(residuals[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

VerificationReport run_verification(const Trajectory& traj, const Params& p,
                                    const RegionSpec& region,
                                    const ToleranceModel& tol,
                                    std::optional<double> lambda0) {
  VerificationReport rep;
  for (auto& c : check_energy_identity(traj, p, tol)) rep.add(c);
  for (auto& c : check_mass(traj, p, tol)) rep.add(c);
  for (auto& c : check_radius_bounds(traj, p)) rep.add(c);
  for (auto& c : check_envelopes(traj, p)) rep.add(c);
  const TestFunctionFamily fam = TestFunctionFamily::standard(traj);
  for (auto& c : check_weak_form(traj, fam, p, tol)) rep.add(c);
  rep.add(check_bd_residual(traj, p, region, tol));
  for (auto& c : check_moments(traj, p, region)) rep.add(c);
  for (auto& c : regularity_monitor(traj, region, p, lambda0)) rep.add(c);
  return rep;
}

}  // namespace fbns
