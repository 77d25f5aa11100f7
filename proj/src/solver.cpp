#include "fbns/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fbns/coords.hpp"

namespace fbns {

const char* to_string(HaltReason h) {
  switch (h) {
    case HaltReason::None: return "none";
    case HaltReason::Horizon: return "horizon";
    case HaltReason::MonitorTrip: return "monitor-trip";
    case HaltReason::StepUnderflow: return "step-underflow";
  }
  return "?";
}

namespace {

void require_integrable(const LagrangianState& s) {
  if (!(s.rho > 0.0).all())
    throw DegenerateState("nonpositive density at tau=" +
                          std::to_string(s.tau));
}

// Everything the run loop needs from one state evaluation. The public
// semi_discrete_rhs and dissipation_increment expose slices of this.
struct FullEval {
  Rhs rhs;
  DissipationRates rates;
  double stress_max = 0.0;
};

FullEval evaluate(const LagrangianState& s, const Params& p,
                  bool with_rates) {
  require_integrable(s);
  const MassGrid& g = s.g();
  const Index m = s.num_cells();
  const double n = p.dim;

  const Array rn1_node = pow_array(s.r, n - 1.0);
  const Array flux_div = ddx_nodes_to_cells(g, (rn1_node * s.u).eval());
  const Array rho_gamma = pow_array(s.rho, p.gamma);
  const Array rho_th = pow_array(s.rho, p.theta);
  const Array rho_th1 = rho_th * s.rho;
  const Array stress_flux = rho_gamma - p.theta * rho_th1 * flux_div;

  FullEval ev;
  ev.rhs.drho = -s.rho.square() * flux_div;
  ev.rhs.dr = s.u;
  ev.rhs.da = s.u[m];

  const Array& w = g.node_weights();
  Array dflux(m + 1), dth(m + 1);
  dflux[0] = 0.0;
  dth[0] = 0.0;
  dflux.segment(1, m - 1) =
      (stress_flux.tail(m - 1) - stress_flux.head(m - 1)) /
      w.segment(1, m - 1);
  dth.segment(1, m - 1) =
      (rho_th.tail(m - 1) - rho_th.head(m - 1)) / w.segment(1, m - 1);
  // vacuum side of the interface node: both fluxes vanish with the density
  dflux[m] = -stress_flux[m - 1] / w[m];
  dth[m] = -rho_th[m - 1] / w[m];

  ev.rhs.du = -(rn1_node * dflux) -
              (n - 1.0) * pow_array(s.r, n - 2.0) * dth * s.u;
  ev.rhs.du[0] = 0.0;

  const Array ux = ddx_nodes_to_cells(g, s.u);
  const Array rn1_cell = pow_array(node_to_cell_average(s.r), n - 1.0);
  const Array shear = rn1_cell * ux;
  ev.stress_max = (s.rho * shear).abs().maxCoeff();

  if (with_rates) {
    const double pre_grad = 1.0 - n * (1.0 - p.theta);
    const Array uor = (s.u.head(m) + s.u.tail(m)) / (s.r.head(m) + s.r.tail(m));
    ev.rates.grad_geom =
        pre_grad * (n - 1.0) *
        cell_integral(g, pow_array(s.rho, p.theta - 1.0) * uor.square());
    ev.rates.grad_visc =
        pre_grad * cell_integral(g, rho_th1 * shear.square());
    ev.rates.div_flux = (p.theta - 1.0 + 1.0 / n) *
                        cell_integral(g, rho_th1 * flux_div.square());
    ev.rates.div_shear = (n - 1.0) / n *
                         cell_integral(g, rho_th1 * (shear - uor / s.rho).square());
  }
  return ev;
}

bool state_ok(const LagrangianState& s) {
  if (!(s.rho > 0.0).all() || !s.rho.isFinite().all()) return false;
  if (!s.u.isFinite().all()) return false;
  const Index m = s.num_cells();
  for (Index j = 0; j < m; ++j)
    if (!(s.r[j + 1] > s.r[j])) return false;
  return std::isfinite(s.a) && s.a > 0.0;
}

LagrangianState euler_stage(const LagrangianState& s, const Rhs& f,
                            double dtau) {
  LagrangianState out;
  out.tau = s.tau + dtau;
  out.rho = s.rho + dtau * f.drho;
  out.u = s.u + dtau * f.du;
  out.r = s.r + dtau * f.dr;
  out.a = s.a + dtau * f.da;
  out.grid = s.grid;
  out.u[0] = 0.0;
  return out;
}

struct StepEval {
  LagrangianState next;
  DissipationRates r0, r1;  // rates at the two stages
  double stress0 = 0.0;
  bool ok = false;
};

StepEval advance(const LagrangianState& s, double dtau, const Params& p,
                 bool with_rates) {
  StepEval out;
  const FullEval e0 = evaluate(s, p, with_rates);
  out.r0 = e0.rates;
  out.stress0 = e0.stress_max;
  LagrangianState s1 = euler_stage(s, e0.rhs, dtau);
  if (!state_ok(s1)) return out;
  const FullEval e1 = evaluate(s1, p, with_rates);
  out.r1 = e1.rates;

  LagrangianState s2 = euler_stage(s1, e1.rhs, dtau);
  out.next.tau = s.tau + dtau;
  out.next.rho = 0.5 * (s.rho + s2.rho);
  out.next.u = 0.5 * (s.u + s2.u);
  out.next.r = 0.5 * (s.r + s2.r);
  out.next.a = 0.5 * (s.a + s2.a);
  out.next.grid = s.grid;
  out.next.u[0] = 0.0;
  out.ok = state_ok(out.next);
  return out;
}

}  // namespace

Rhs semi_discrete_rhs(const LagrangianState& s, const Params& p) {
  return evaluate(s, p, false).rhs;
}

double cfl_dtau(const LagrangianState& s, const Params& p, double safety) {
  const MassGrid& g = s.g();
  require_integrable(s);
  const Array rn1_cell =
      pow_array(node_to_cell_average(s.r), p.dim - 1.0);
  const Array viscous =
      g.widths.square() /
      (p.theta * pow_array(s.rho, p.theta + 1.0) * rn1_cell.square());
  const Array acoustic =
      g.widths / (pow_array(s.rho, 0.5 * (p.gamma - 1.0)) * rn1_cell);
  return safety * std::min(viscous.minCoeff(), acoustic.minCoeff());
}

std::optional<LagrangianState> step(const LagrangianState& s, double dtau,
                                    const Params& p) {
  StepEval e = advance(s, dtau, p, false);
  if (!e.ok) return std::nullopt;
  return std::move(e.next);
}

std::pair<double, double> default_monitor_bounds(const InitialData& d,
                                                 const Params& p) {
  const LagrangianState s = d.state();
  const double e0 = energy(s, p);
  const double m0 = 4.0 * stress_monitor(s, p) + 1.0;
  const double m1 = 4.0 * s.u.abs().maxCoeff() + std::sqrt(e0);
  return {m0, m1};
}

HorizonEstimate horizon_estimates(const InitialData& d, const Params& p,
                                  double m0, double m1, double x0) {
  if (!(m0 > 0.0) || !(m1 > 0.0))
    throw std::invalid_argument("horizon_estimates: monitor bounds must be positive");
  const double e0 = energy(d.state(), p);
  const double n = p.dim;
  HorizonEstimate h;
  h.m0 = m0;
  h.m1 = m1;
  h.t1a = p.a0 / m1;
  const double growth = 2.0 * m1 * std::pow(e0, 1.0 / (n * (p.gamma - 1.0))) *
                            std::pow(x0, -p.gamma / (n * (p.gamma - 1.0))) +
                        2.0 * m0;
  h.t1b = std::min(h.t1a, std::log(2.0) / growth);
  return h;
}

namespace {

// Per-step margin tracking support: grid-dependent envelopes precomputed once.
struct BoundTracker {
  Array xq;        // x^{g/(N(g-1))} at nodes 1..M
  Array sep_width; // (x_j - x_i)^{g/(g-1)} for adjacent pairs
  Array sep_from0; // x_j^{g/(g-1)}
  Array sep_to1;   // (1 - x_j)^{g/(g-1)}
  double radius_const = 0.0;
  double sep_const = 0.0;

  BoundTracker(const MassGrid& g, const Params& p, double e0) {
    const double n = p.dim;
    const double q = p.gamma / (n * (p.gamma - 1.0));
    const double q2 = p.gamma / (p.gamma - 1.0);
    const Index m = g.num_cells();
    xq = pow_array(g.nodes.tail(m), q);
    sep_width = pow_array(g.widths, q2);
    sep_from0 = pow_array(g.nodes.segment(1, m - 1), q2);
    sep_to1 = pow_array((1.0 - g.nodes.segment(1, m - 1)).eval(), q2);
    radius_const = std::pow(e0, -1.0 / (n * (p.gamma - 1.0)));
    sep_const = std::pow(e0, -1.0 / (p.gamma - 1.0));
  }

  void update(const LagrangianState& s, const Params& p, double t1a,
              double t_env, const Array& rho0, BoundTrack& b) const {
    const Index m = s.num_cells();
    const double radius_margin =
        (s.r.tail(m) / xq).minCoeff() - radius_const;
    b.radius = std::min(b.radius, radius_margin);
    b.interface_lo = std::min(b.interface_lo, s.a - radius_const);
    if (s.tau <= t1a)
      b.interface_hi = std::min(b.interface_hi, 2.0 * p.a0 - s.a);

    const Array rn = pow_array(s.r, static_cast<double>(p.dim));
    const double adj =
        ((rn.tail(m) - rn.head(m)) / sep_width).minCoeff();
    const double from0 = (rn.segment(1, m - 1) / sep_from0).minCoeff();
    const double to1 =
        ((rn[m] - rn.segment(1, m - 1)) / sep_to1).minCoeff();
    b.separation = std::min(
        b.separation, std::min(adj, std::min(from0, to1)) - sep_const);

    if (s.tau <= t_env) {
      const Array ratio = s.rho / rho0;
      b.envelope_lo = std::min(b.envelope_lo, ratio.minCoeff() - 0.5);
      b.envelope_hi = std::min(b.envelope_hi, 2.0 - ratio.maxCoeff());
    }
  }
};

}  // namespace

Trajectory run(const InitialData& d, const Params& p,
               const HorizonEstimate& monitors, const RunControl& ctl) {
  if (ctl.horizon < 0.0)
    throw std::invalid_argument("run: horizon must be nonnegative");
  if (ctl.snapshots < 1)
    throw std::invalid_argument("run: need at least one output interval");

  Trajectory traj;
  LagrangianState s = d.state();
  require_integrable(s);

  traj.e0 = energy(s, p);
  traj.m0 = monitors.m0;
  traj.m1 = monitors.m1;
  traj.t1a = monitors.t1a;
  traj.t1b = monitors.t1b;
  traj.dtau_min = std::numeric_limits<double>::infinity();

  const double inf = std::numeric_limits<double>::infinity();
  traj.bounds = {inf, inf, inf, inf, inf, inf};

  DissipationTotals totals;
  traj.snapshots.push_back(s);
  traj.dissipation.push_back(totals);

  const BoundTracker tracker(s.g(), p, traj.e0);
  const double t_env = std::min(monitors.t1a, monitors.t1b);
  tracker.update(s, p, monitors.t1a, t_env, d.rho0, traj.bounds);
  traj.mass_defect_max = std::abs(mass_lagrangian(s) - 1.0);

  {
    MonitorSample m0s;
    m0s.tau = 0.0;
    m0s.stress_max = stress_monitor(s, p);
    m0s.u_max = s.u.abs().maxCoeff();
    traj.monitor_log.push_back(m0s);
  }

  if (ctl.horizon == 0.0) {
    traj.halted_reason = HaltReason::Horizon;
    return traj;
  }

  const double dt_out = ctl.horizon / ctl.snapshots;
  int next_snap = 1;
  double stress_running = traj.monitor_log[0].stress_max;
  double umax_running = traj.monitor_log[0].u_max;

  auto emit_snapshot = [&](double tau) {
    traj.snapshots.push_back(s);
    traj.dissipation.push_back(totals);
    MonitorSample ms;
    ms.tau = tau;
    ms.stress_max = stress_running;
    ms.u_max = umax_running;
    traj.monitor_log.push_back(ms);
    stress_running = 0.0;
    umax_running = 0.0;
  };

  while (s.tau < ctl.horizon) {
    const double t_next =
        std::min(ctl.horizon, next_snap * dt_out);
    double dtau = std::min(cfl_dtau(s, p, ctl.safety), t_next - s.tau);
    bool hit_output = (dtau == t_next - s.tau);

    StepEval e;
    int halvings = 0;
    for (;; ++halvings) {
      e = advance(s, dtau, p, true);
      if (e.ok) break;
      if (halvings >= 20) {
        traj.halted_reason = HaltReason::StepUnderflow;
        std::ostringstream msg;
        msg << "step rejected 20 times at tau=" << s.tau;
        traj.trip_what = msg.str();
        traj.trip_tau = s.tau;
        emit_snapshot(s.tau);
        return traj;
      }
      dtau *= 0.5;
      hit_output = false;
    }

    totals.grad_geom += 0.5 * dtau * (e.r0.grad_geom + e.r1.grad_geom);
    totals.grad_visc += 0.5 * dtau * (e.r0.grad_visc + e.r1.grad_visc);
    totals.div_flux += 0.5 * dtau * (e.r0.div_flux + e.r1.div_flux);
    totals.div_shear += 0.5 * dtau * (e.r0.div_shear + e.r1.div_shear);

    s = std::move(e.next);
    if (hit_output) s.tau = t_next;
    ++traj.steps;
    traj.dtau_min = std::min(traj.dtau_min, dtau);
    traj.dtau_max = std::max(traj.dtau_max, dtau);
    traj.mass_defect_max = std::max(traj.mass_defect_max,
                                    std::abs(mass_lagrangian(s) - 1.0));

    const double stress = stress_monitor(s, p);
    const double umax = s.u.abs().maxCoeff();
    stress_running = std::max(stress_running, stress);
    umax_running = std::max(umax_running, umax);
    tracker.update(s, p, monitors.t1a, t_env, d.rho0, traj.bounds);

    if (stress > monitors.m0 || umax > monitors.m1) {
      traj.halted_reason = HaltReason::MonitorTrip;
      traj.trip_tau = s.tau;
      std::ostringstream msg;
      if (stress > monitors.m0)
        msg << "stress " << stress << " exceeded M0=" << monitors.m0;
      else
        msg << "velocity " << umax << " exceeded M1=" << monitors.m1;
      traj.trip_what = msg.str();
      emit_snapshot(s.tau);
      return traj;
    }

    if (hit_output) {
      emit_snapshot(t_next);
      ++next_snap;
    }
  }

  traj.halted_reason = HaltReason::Horizon;
  return traj;
}

double density_exponential_crosscheck(const Trajectory& traj,
                                      const Params& p) {
  if (traj.snapshots.size() < 2)
    throw std::invalid_argument(
        "density_exponential_crosscheck: need at least two snapshots");
  const LagrangianState& s0 = traj.front();
  const MassGrid& g = s0.g();
  const Index m = s0.num_cells();
  const double n = p.dim;

  auto contraction_rate = [&](const LagrangianState& s) -> Array {
    const Array rn1_node = pow_array(s.r, n - 1.0);
    return s.rho * ddx_nodes_to_cells(g, (rn1_node * s.u).eval());
  };

  Array integral = Array::Zero(m);
  Array prev_rate = contraction_rate(s0);
  double prev_tau = s0.tau;
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
    const LagrangianState& s = traj.snapshots[k];
    const Array rate = contraction_rate(s);
    integral += 0.5 * (s.tau - prev_tau) * (prev_rate + rate);
    prev_rate = rate;
    prev_tau = s.tau;
    const Array rebuilt = s0.rho * (-integral).exp();
    worst = std::max(worst, ((rebuilt - s.rho) / s.rho).abs().maxCoeff());
  }
  return worst;
}

}  // namespace fbns
