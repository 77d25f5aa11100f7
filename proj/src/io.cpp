#include "fbns/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fbns/functionals.hpp"

namespace fbns {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "tau,x,rho,u,r\n";
  for (const auto& s : traj.snapshots) {
    const MassGrid& g = s.g();
    const Index m = g.num_cells();
    const std::string tau = format_double(s.tau);
    for (Index j = 0; j <= m; ++j) {
      const double rho = j < m ? s.rho[j] : 0.0;
      out << tau << ',' << format_double(g.nodes[j]) << ','
          << format_double(rho) << ',' << format_double(s.u[j]) << ','
          << format_double(s.r[j]) << '\n';
    }
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "tau,x,rho,u,r")
    throw std::runtime_error(path + ": unexpected trajectory header");

  struct Row {
    double tau, x, rho, u, r;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 5)
      throw std::runtime_error(path + ": malformed trajectory row");
    rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]),
                    std::stod(f[3]), std::stod(f[4])});
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty trajectory");

  // nodes per snapshot: count rows of the first tau block
  std::size_t nn = 1;
  while (nn < rows.size() && rows[nn].tau == rows[0].tau) ++nn;
  if (rows.size() % nn != 0)
    throw std::runtime_error(path + ": ragged trajectory blocks");

  Array nodes(nn);
  for (std::size_t j = 0; j < nn; ++j) nodes[j] = rows[j].x;
  auto grid = std::make_shared<const MassGrid>(MassGrid::from_nodes(nodes));

  Trajectory traj;
  for (std::size_t k = 0; k < rows.size() / nn; ++k) {
    LagrangianState s;
    s.grid = grid;
    s.tau = rows[k * nn].tau;
    s.rho.resize(nn - 1);
    s.u.resize(nn);
    s.r.resize(nn);
    for (std::size_t j = 0; j < nn; ++j) {
      const Row& row = rows[k * nn + j];
      if (j + 1 < nn) s.rho[j] = row.rho;
      s.u[j] = row.u;
      s.r[j] = row.r;
    }
    s.a = s.r[nn - 1];
    traj.snapshots.push_back(std::move(s));
  }
  traj.dissipation.assign(traj.snapshots.size(), {});
  return traj;
}

void write_functionals_csv(const std::string& path,
                           const std::vector<FunctionalReport>& rows,
                           const std::vector<MonitorSample>& monitors) {
  std::ofstream out = open_out(path);
  const std::size_t nmom = rows.empty() ? 0 : rows.front().moments.size();
  out << "tau,e,diss_grad_geom,diss_grad_visc,diss_div_flux,diss_div_shear,"
         "mass_lag,mass_eul,bd_entropy,bd_budget";
  for (std::size_t k = 1; k <= nmom; ++k) out << ",moment_" << k;
  out << ",margin_radius,margin_interface_lo,margin_interface_hi,"
         "margin_envelope_lo,margin_envelope_hi,margin_eulerian_lo,"
         "margin_eulerian_hi,margin_separation,stress_max,u_max,"
         "monitor_stress,monitor_u\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FunctionalReport& r = rows[i];
    out << format_double(r.tau) << ',' << format_double(r.e) << ','
        << format_double(r.dissipation.grad_geom) << ','
        << format_double(r.dissipation.grad_visc) << ','
        << format_double(r.dissipation.div_flux) << ','
        << format_double(r.dissipation.div_shear) << ','
        << format_double(r.mass_lag) << ',' << format_double(r.mass_eul)
        << ',' << format_double(r.bd_entropy_value) << ','
        << format_double(r.bd_budget);
    for (double mv : r.moments) out << ',' << format_double(mv);
    const BoundMargins& m = r.margins;
    out << ',' << format_double(m.radius) << ','
        << format_double(m.interface_lo) << ','
        << format_double(m.interface_hi) << ','
        << format_double(m.envelope_lo) << ','
        << format_double(m.envelope_hi) << ','
        << format_double(m.eulerian_lo) << ','
        << format_double(m.eulerian_hi) << ','
        << format_double(m.separation) << ','
        << format_double(r.stress_max) << ',' << format_double(r.u_max);
    const MonitorSample& ms = monitors.at(i);
    out << ',' << format_double(ms.stress_max) << ','
        << format_double(ms.u_max) << '\n';
  }
}

void read_functionals_csv(const std::string& path, Trajectory& traj) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty functional table");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* key :
       {"tau", "diss_grad_geom", "diss_grad_visc", "diss_div_flux",
        "diss_div_shear", "monitor_stress", "monitor_u"})
    if (!col.count(key))
      throw std::runtime_error(path + ": missing column " + key);

  traj.dissipation.clear();
  traj.monitor_log.clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    DissipationTotals d;
    d.grad_geom = std::stod(f[col["diss_grad_geom"]]);
    d.grad_visc = std::stod(f[col["diss_grad_visc"]]);
    d.div_flux = std::stod(f[col["diss_div_flux"]]);
    d.div_shear = std::stod(f[col["diss_div_shear"]]);
    traj.dissipation.push_back(d);
    MonitorSample ms;
    ms.tau = std::stod(f[col["tau"]]);
    ms.stress_max = std::stod(f[col["monitor_stress"]]);
    ms.u_max = std::stod(f[col["monitor_u"]]);
    traj.monitor_log.push_back(ms);
  }
  if (traj.dissipation.size() != traj.snapshots.size())
    throw std::runtime_error(path + ": row count does not match snapshots");
}

void write_boundary_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "tau,a,u_boundary\n";
  for (const auto& s : traj.snapshots)
    out << format_double(s.tau) << ',' << format_double(s.a) << ','
        << format_double(s.u[s.u.size() - 1]) << '\n';
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const Trajectory& traj) {
  json j;
  j["config"] = json::parse(config_to_json(cfg));
  json run;
  run["halted_reason"] = to_string(traj.halted_reason);
  run["trip_tau"] = traj.trip_tau;
  run["trip_what"] = traj.trip_what;
  run["e0"] = traj.e0;
  run["t1a"] = traj.t1a;
  run["t1b"] = traj.t1b;
  run["m0"] = traj.m0;
  run["m1"] = traj.m1;
  run["steps"] = traj.steps;
  run["dtau_min"] = traj.dtau_min;
  run["dtau_max"] = traj.dtau_max;
  run["mass_defect_max"] = traj.mass_defect_max;
  run["snapshots"] = traj.snapshots.size();
  run["bounds"] = {{"radius", traj.bounds.radius},
                   {"interface_lo", traj.bounds.interface_lo},
                   {"interface_hi", traj.bounds.interface_hi},
                   {"separation", traj.bounds.separation},
                   {"envelope_lo", traj.bounds.envelope_lo},
                   {"envelope_hi", traj.bounds.envelope_hi}};
  j["run"] = run;
  const auto now = std::chrono::system_clock::now();
  j["created_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  open_out(path) << j.dump(2) << '\n';
}

RunConfig read_manifest(const std::string& path, Trajectory& traj) {
  json j;
  open_in(path) >> j;
  const json& run = j.at("run");
  std::string halted = run.at("halted_reason").get<std::string>();
  if (halted == "horizon") traj.halted_reason = HaltReason::Horizon;
  else if (halted == "monitor-trip") traj.halted_reason = HaltReason::MonitorTrip;
  else if (halted == "step-underflow") traj.halted_reason = HaltReason::StepUnderflow;
  else traj.halted_reason = HaltReason::None;
  traj.trip_tau = run.at("trip_tau").get<double>();
  traj.trip_what = run.at("trip_what").get<std::string>();
  traj.e0 = run.at("e0").get<double>();
  traj.t1a = run.at("t1a").get<double>();
  traj.t1b = run.at("t1b").get<double>();
  traj.m0 = run.at("m0").get<double>();
  traj.m1 = run.at("m1").get<double>();
  traj.steps = run.at("steps").get<long>();
  traj.dtau_min = run.at("dtau_min").get<double>();
  traj.dtau_max = run.at("dtau_max").get<double>();
  traj.mass_defect_max = run.at("mass_defect_max").get<double>();
  const json& b = run.at("bounds");
  traj.bounds.radius = b.at("radius").get<double>();
  traj.bounds.interface_lo = b.at("interface_lo").get<double>();
  traj.bounds.interface_hi = b.at("interface_hi").get<double>();
  traj.bounds.separation = b.at("separation").get<double>();
  traj.bounds.envelope_lo = b.at("envelope_lo").get<double>();
  traj.bounds.envelope_hi = b.at("envelope_hi").get<double>();
  return parse_config(j.at("config").dump(), path + "#config");
}

void write_verification_json(const std::string& path,
                             const VerificationReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"id", c.id},
                      {"status", to_string(c.status)},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"what", c.what},
                      {"note", c.note}});
  }
  json j;
  j["checks"] = checks;
  j["orders"] = rep.orders;
  j["all_passed"] = rep.all_passed();
  open_out(path) << j.dump(2) << '\n';
}

void write_plot_script(const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# gnuplot script for the run artifacts in this directory\n"
         "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set terminal pngcairo size 1200,800\n"
         "\n"
         "set output 'energy.png'\n"
         "set xlabel 'tau'\n"
         "plot 'functionals.csv' using 1:2 with lines title 'E', \\\n"
         "     '' using 1:($3+$4) with lines title 'D (gradient split)', \\\n"
         "     '' using 1:($5+$6) with lines title 'D (divergence split)', \\\n"
         "     '' using 1:($2+$3+$4) with lines title 'E + D'\n"
         "\n"
         "set output 'interface.png'\n"
         "plot 'boundary.csv' using 1:2 with lines title 'a(tau)', \\\n"
         "     '' using 1:3 with lines title 'u at interface'\n"
         "\n"
         "set output 'monitors.png'\n"
         "plot 'functionals.csv' using 1:'stress_max' with lines, \\\n"
         "     '' using 1:'u_max' with lines\n";
}

}  // namespace fbns
