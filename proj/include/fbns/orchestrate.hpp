#pragma once

#include <string>
#include <vector>

#include "fbns/config.hpp"
#include "fbns/io.hpp"
#include "fbns/solver.hpp"
#include "fbns/verify.hpp"

namespace fbns {

struct RunArtifacts {
  InitialData data;
  HorizonEstimate monitors;
  Trajectory trajectory;
  std::vector<FunctionalReport> reports;
};

/// Builds data, resolves monitors and horizon, integrates, and evaluates the
/// per-snapshot functional table.
RunArtifacts execute_run(const RunConfig& cfg);

/// Writes the four artifact files plus the plot script into dir.
void write_run_artifacts(const std::string& dir, const RunConfig& cfg,
                         const RunArtifacts& art);

/// Reloads trajectory, dissipation, monitors and run metadata from dir.
/// Returns the config echoed in the manifest.
RunConfig load_run_artifacts(const std::string& dir, Trajectory& traj);

/// Verification over a run directory; writes verification.json there.
VerificationReport verify_run_dir(const std::string& dir,
                                  const RunConfig& cfg);

struct ConvergenceStudy {
  std::vector<Index> grids;
  std::vector<double> dx;
  /// check id -> residual per grid, same order as grids
  std::map<std::string, std::vector<double>> residuals;
  std::map<std::string, double> orders;
  std::vector<double> bd_entropy;  ///< per grid, for grid-stability
  double bd_entropy_variation = 0.0;
};

/// Runs the configured case on each grid, collects residual-style check
/// values, and fits convergence orders. Grids must hold at least three
/// distinct sizes.
ConvergenceStudy converge(const RunConfig& base, std::vector<Index> grids,
                          int jobs = 1);

std::string converge_to_json(const ConvergenceStudy& st);

struct SweepAxis {
  std::string parameter;         ///< one of the scalar fields of Params
  std::vector<double> values;
};

struct SweepRow {
  std::map<std::string, double> values;
  bool admissible = false;
  double beta = 0.0;
  double t1a = 0.0, t1b = 0.0;
  std::string outcome;  ///< halted reason, "inadmissible", or "not-run"
};

/// Cartesian sweep over parameter axes; rows with admissible parameters get
/// horizon estimates, and full runs when execute is set. Members run
/// concurrently up to jobs.
std::vector<SweepRow> sweep(const RunConfig& base,
                            const std::vector<SweepAxis>& axes, bool execute,
                            int jobs = 1);

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepAxis>& axes,
                     const std::vector<SweepRow>& rows);

}  // namespace fbns
