// Command-line front end: run a configured case, drive refinement studies,
// verify run artifacts, and sweep parameter regions.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbns/orchestrate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

std::vector<fbns::SweepAxis> load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fbns::ConfigError(path + ": cannot open sweep spec");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw fbns::ConfigError(path + ": " + e.what());
  }
  std::vector<fbns::SweepAxis> axes;
  for (const auto& a : j.at("axes")) {
    fbns::SweepAxis ax;
    ax.parameter = a.at("parameter").get<std::string>();
    for (const auto& v : a.at("values")) ax.values.push_back(v.get<double>());
    axes.push_back(std::move(ax));
  }
  return axes;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const fbns::RunConfig cfg = fbns::load_config(config_path);
  const fbns::RunArtifacts art = fbns::execute_run(cfg);
  fbns::write_run_artifacts(out_dir, cfg, art);
  std::cout << "run: " << art.trajectory.steps << " steps, halted: "
            << fbns::to_string(art.trajectory.halted_reason) << ", artifacts in "
            << out_dir << "\n";
  return kExitOk;
}

int cmd_converge(const std::string& config_path,
                 const std::vector<long>& grids, const std::string& out_dir,
                 int jobs) {
  const fbns::RunConfig cfg = fbns::load_config(config_path);
  std::vector<fbns::Index> ms(grids.begin(), grids.end());
  const fbns::ConvergenceStudy st = fbns::converge(cfg, ms, jobs);
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "convergence.json").string();
  std::ofstream(path) << fbns::converge_to_json(st) << '\n';
  std::cout << "converge: report in " << path << "\n";
  for (const auto& [id, p] : st.orders)
    std::cout << "  order " << id << " = " << p << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& dir, const std::string& config_path) {
  fbns::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = fbns::load_config(config_path);
  } else {
    fbns::Trajectory tmp;
    cfg = fbns::load_run_artifacts(dir, tmp);
  }
  const fbns::VerificationReport rep = fbns::verify_run_dir(dir, cfg);
  for (const auto& c : rep.checks)
    std::cout << fbns::to_string(c.status) << "  " << c.id
              << "  residual=" << c.residual << " tol=" << c.tolerance
              << "\n";
  return rep.all_passed() ? kExitOk : kExitCheckFailure;
}

int cmd_sweep(const std::string& config_path, const std::string& spec_path,
              const std::string& out_dir, bool execute, int jobs) {
  const fbns::RunConfig cfg = fbns::load_config(config_path);
  const auto axes = load_sweep_spec(spec_path);
  const auto rows = fbns::sweep(cfg, axes, execute, jobs);
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "sweep.csv").string();
  fbns::write_sweep_csv(path, axes, rows);
  std::cout << "sweep: " << rows.size() << " rows in " << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-boundary radial flow simulator and checker"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", dir, spec_path;
  std::vector<long> grids;
  int jobs = 1;
  bool execute = false;

  auto* run = app.add_subcommand("run", "integrate one configured case");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "artifact directory");

  auto* conv = app.add_subcommand("converge", "refinement-order study");
  conv->add_option("--config", config_path, "config file")->required();
  conv->add_option("--grids", grids, "grid sizes (at least 3)")
      ->required()
      ->delimiter(',');
  conv->add_option("--out", out_dir, "output directory");
  conv->add_option("--jobs", jobs, "parallel grid runs");

  auto* ver = app.add_subcommand("verify", "check run artifacts");
  ver->add_option("--dir", dir, "run artifact directory")->required();
  ver->add_option("--config", config_path,
                  "config override (defaults to the manifest echo)");

  auto* swp = app.add_subcommand("sweep", "parameter-region sweep");
  swp->add_option("--config", config_path, "base config file")->required();
  swp->add_option("--spec", spec_path, "sweep axes (json)")->required();
  swp->add_option("--out", out_dir, "output directory");
  swp->add_flag("--execute", execute, "run each admissible member");
  swp->add_option("--jobs", jobs, "parallel members");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (conv->parsed()) return cmd_converge(config_path, grids, out_dir, jobs);
    if (ver->parsed()) return cmd_verify(dir, config_path);
    if (swp->parsed())
      return cmd_sweep(config_path, spec_path, out_dir, execute, jobs);
  } catch (const fbns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitConfigError;
}
