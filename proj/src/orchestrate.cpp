#include "fbns/orchestrate.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fbns {

using nlohmann::json;
namespace fs = std::filesystem;

RunArtifacts execute_run(const RunConfig& cfg) {
  const AdmissibilityReport adm = validate_params(cfg.params);
  if (!adm.admissible) {
    std::ostringstream msg;
    msg << "parameters not admissible:";
    for (const auto& v : adm.violations) msg << ' ' << v.id;
    throw ConfigError(msg.str());
  }

  RunArtifacts art;
  art.data = make_initial_data(cfg.params, cfg.profile, cfg.cells);

  const auto [m0_def, m1_def] = default_monitor_bounds(art.data, cfg.params);
  const double m0 = cfg.m0.value_or(m0_def);
  const double m1 = cfg.m1.value_or(m1_def);
  art.monitors =
      horizon_estimates(art.data, cfg.params, m0, m1, cfg.region.x0);

  RunControl ctl;
  ctl.horizon = cfg.resolve_horizon(art.monitors);
  ctl.snapshots = cfg.snapshots;
  ctl.safety = cfg.safety;
  art.trajectory = run(art.data, cfg.params, art.monitors, ctl);

  const double budget =
      bd_entropy_budget(art.trajectory.front(), cfg.region, cfg.params);
  art.reports.reserve(art.trajectory.snapshots.size());
  for (std::size_t k = 0; k < art.trajectory.snapshots.size(); ++k) {
    FunctionalReport rep = functional_report(
        art.trajectory.snapshots[k], art.trajectory.dissipation[k],
        art.data.rho0, cfg.params, cfg.region, art.trajectory.e0);
    rep.bd_budget = budget;
    art.reports.push_back(std::move(rep));
  }
  return art;
}

void write_run_artifacts(const std::string& dir, const RunConfig& cfg,
                         const RunArtifacts& art) {
  fs::create_directories(dir);
  const fs::path base(dir);
  write_trajectory_csv((base / artifact::trajectory).string(),
                       art.trajectory);
  write_functionals_csv((base / artifact::functionals).string(), art.reports,
                        art.trajectory.monitor_log);
  write_boundary_csv((base / artifact::boundary).string(), art.trajectory);
  write_manifest((base / artifact::manifest).string(), cfg, art.trajectory);
  write_plot_script((base / artifact::plots).string());
}

RunConfig load_run_artifacts(const std::string& dir, Trajectory& traj) {
  const fs::path base(dir);
  const fs::path tpath = base / artifact::trajectory;
  const fs::path fpath = base / artifact::functionals;
  const fs::path mpath = base / artifact::manifest;
  for (const fs::path* p : {&tpath, &fpath, &mpath})
    if (!fs::exists(*p))
      throw std::runtime_error("missing artifact: " + p->string());
  traj = read_trajectory_csv(tpath.string());
  read_functionals_csv(fpath.string(), traj);
  return read_manifest(mpath.string(), traj);
}

VerificationReport verify_run_dir(const std::string& dir,
                                  const RunConfig& cfg) {
  Trajectory traj;
  load_run_artifacts(dir, traj);
  VerificationReport rep = run_verification(traj, cfg.params, cfg.region,
                                            cfg.tol, cfg.lambda0);
  {
    // trajectory-level cross-check of the density against the time
    // quadrature of its logged contraction rate
    CheckResult c;
    c.id = "density.exponential";
    c.what = "density rebuilt from the contraction-rate quadrature";
    c.residual = density_exponential_crosscheck(traj, cfg.params);
    const double dts = traj.snapshots.size() > 1
                           ? traj.snapshots[1].tau - traj.snapshots[0].tau
                           : 0.0;
    const double dx = traj.front().g().widths.maxCoeff();
    c.tolerance = cfg.tol.identity(dx, dts);
    c.status =
        c.residual <= c.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    rep.add(c);
  }
  write_verification_json((fs::path(dir) / artifact::verification).string(),
                          rep);
  return rep;
}

namespace {

struct GridOutcome {
  Index cells = 0;
  double dx = 0.0;
  std::map<std::string, double> residuals;
  double bd_entropy = 0.0;
};

GridOutcome run_one_grid(RunConfig cfg, Index cells) {
  cfg.cells = cells;
  // snapshot count scales with the grid so the time quadrature of the
  // trajectory-level checks refines jointly with the mesh
  cfg.snapshots = std::max(16, static_cast<int>(cells / 2));
  const RunArtifacts art = execute_run(cfg);

  GridOutcome out;
  out.cells = cells;
  out.dx = art.trajectory.front().g().widths.maxCoeff();
  VerificationReport rep = run_verification(
      art.trajectory, cfg.params, cfg.region, cfg.tol, cfg.lambda0);
  for (const auto& c : rep.checks) out.residuals[c.id] = c.residual;
  out.residuals["density.exponential"] =
      density_exponential_crosscheck(art.trajectory, cfg.params);
  out.bd_entropy = art.reports.back().bd_entropy_value;
  return out;
}

}  // namespace

ConvergenceStudy converge(const RunConfig& base, std::vector<Index> grids,
                          int jobs) {
  if (grids.size() < 3)
    throw ConfigError("converge: need at least three grid sizes");
  if (std::set<Index>(grids.begin(), grids.end()).size() != grids.size())
    throw ConfigError("converge: grid sizes must be distinct");
  std::sort(grids.begin(), grids.end());

  // pin horizon and monitor bounds from the base grid so every member
  // integrates the same problem to the same final time
  RunConfig pinned = base;
  {
    const InitialData data =
        make_initial_data(base.params, base.profile, base.cells);
    const auto [m0_def, m1_def] = default_monitor_bounds(data, base.params);
    pinned.m0 = base.m0.value_or(m0_def);
    pinned.m1 = base.m1.value_or(m1_def);
    const HorizonEstimate h = horizon_estimates(
        data, base.params, *pinned.m0, *pinned.m1, base.region.x0);
    pinned.horizon = base.resolve_horizon(h);
  }

  std::vector<GridOutcome> outcomes(grids.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < grids.size(); ++i)
      outcomes[i] = run_one_grid(pinned, grids[i]);
  } else {
    std::vector<std::future<GridOutcome>> futs;
    for (Index m : grids)
      futs.push_back(std::async(std::launch::async, run_one_grid, pinned, m));
    for (std::size_t i = 0; i < futs.size(); ++i) outcomes[i] = futs[i].get();
  }

  ConvergenceStudy st;
  st.grids = grids;
  for (const auto& o : outcomes) {
    st.dx.push_back(o.dx);
    st.bd_entropy.push_back(o.bd_entropy);
  }
  for (const auto& [id, res] : outcomes.front().residuals) {
    std::vector<double> series;
    for (const auto& o : outcomes) series.push_back(o.residuals.at(id));
    st.residuals[id] = series;
  }

  // orders only for residual-style checks that actually shrink
  static const char* order_checks[] = {
      "energy.identity_grad", "energy.identity_div", "mass.eulerian",
      "weakform.continuity",  "weakform.momentum",   "bd.residual",
      "density.exponential"};
  for (const char* id : order_checks) {
    auto it = st.residuals.find(id);
    if (it != st.residuals.end())
      st.orders[id] = fit_order(st.dx, it->second);
  }

  const std::size_t n = st.bd_entropy.size();
  const double fine = st.bd_entropy[n - 1], coarse = st.bd_entropy[n - 2];
  st.bd_entropy_variation =
      std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
  return st;
}

std::string converge_to_json(const ConvergenceStudy& st) {
  json j;
  j["grids"] = st.grids;
  j["dx"] = st.dx;
  j["residuals"] = st.residuals;
  j["orders"] = st.orders;
  j["bd_entropy"] = st.bd_entropy;
  j["bd_entropy_variation"] = st.bd_entropy_variation;
  return j.dump(2);
}

namespace {

void set_param(Params& p, const std::string& name, double v) {
  if (name == "gamma") p.gamma = v;
  else if (name == "theta") p.theta = v;
  else if (name == "sigma") p.sigma = v;
  else if (name == "a0") p.a0 = v;
  else if (name == "rho_star_lo") p.rho_star_lo = v;
  else if (name == "rho_star_hi") p.rho_star_hi = v;
  else if (name == "m") p.m = static_cast<int>(v);
  else if (name == "dim") p.dim = static_cast<int>(v);
  else throw ConfigError("sweep: unknown parameter '" + name + "'");
}

SweepRow sweep_one(const RunConfig& base, const std::vector<SweepAxis>& axes,
                   const std::vector<std::size_t>& idx, bool execute) {
  RunConfig cfg = base;
  SweepRow row;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    row.values[axes[a].parameter] = axes[a].values[idx[a]];
    set_param(cfg.params, axes[a].parameter, axes[a].values[idx[a]]);
  }
  row.beta = cfg.params.beta();
  row.admissible = validate_params(cfg.params).admissible;
  if (!row.admissible) {
    row.outcome = "inadmissible";
    return row;
  }
  const InitialData data =
      make_initial_data(cfg.params, cfg.profile, cfg.cells);
  const auto [m0_def, m1_def] = default_monitor_bounds(data, cfg.params);
  const HorizonEstimate h =
      horizon_estimates(data, cfg.params, cfg.m0.value_or(m0_def),
                        cfg.m1.value_or(m1_def), cfg.region.x0);
  row.t1a = h.t1a;
  row.t1b = h.t1b;
  if (!execute) {
    row.outcome = "not-run";
    return row;
  }
  RunControl ctl;
  ctl.horizon = cfg.resolve_horizon(h);
  ctl.snapshots = cfg.snapshots;
  ctl.safety = cfg.safety;
  const Trajectory traj = run(data, cfg.params, h, ctl);
  row.outcome = to_string(traj.halted_reason);
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const RunConfig& base,
                            const std::vector<SweepAxis>& axes, bool execute,
                            int jobs) {
  if (axes.empty()) throw ConfigError("sweep: empty sweep specification");
  for (const auto& ax : axes)
    if (ax.values.empty())
      throw ConfigError("sweep: axis '" + ax.parameter + "' has no values");

  std::vector<std::vector<std::size_t>> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    points.push_back(idx);
    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++idx[a] < axes[a].values.size()) break;
      idx[a] = 0;
    }
    if (a == axes.size()) break;
  }

  std::vector<SweepRow> rows(points.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i)
      rows[i] = sweep_one(base, axes, points[i], execute);
  } else {
    std::vector<std::future<SweepRow>> futs;
    futs.reserve(points.size());
    for (const auto& pt : points)
      futs.push_back(std::async(std::launch::async, sweep_one, std::cref(base),
                                std::cref(axes), std::cref(pt), execute));
    for (std::size_t i = 0; i < futs.size(); ++i) rows[i] = futs[i].get();
  }
  return rows;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepAxis>& axes,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& ax : axes) out << ax.parameter << ',';
  out << "beta,admissible,t1a,t1b,outcome\n";
  for (const auto& row : rows) {
    for (const auto& ax : axes)
      out << format_double(row.values.at(ax.parameter)) << ',';
    out << format_double(row.beta) << ',' << (row.admissible ? 1 : 0) << ','
        << format_double(row.t1a) << ',' << format_double(row.t1b) << ','
        << row.outcome << '\n';
  }
}

}  // namespace fbns
