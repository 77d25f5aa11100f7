#pragma once

#include <string>
#include <vector>

#include "fbns/config.hpp"
#include "fbns/functionals.hpp"
#include "fbns/report.hpp"
#include "fbns/state.hpp"

namespace fbns {

/// Artifact file names inside a run directory.
namespace artifact {
inline constexpr const char* trajectory = "trajectory.csv";
inline constexpr const char* functionals = "functionals.csv";
inline constexpr const char* boundary = "boundary.csv";
inline constexpr const char* manifest = "manifest.json";
inline constexpr const char* verification = "verification.json";
inline constexpr const char* plots = "plots.gp";
}  // namespace artifact

/// Round-trip exact float formatting used by every CSV writer.
std::string format_double(double v);

/// Snapshot table, one row per node and snapshot with columns
/// tau,x,rho,u,r. The rho column holds the cell value to the right of the
/// node; the final row of each snapshot carries the vacuum value 0.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Reads the table back into snapshots (grid rebuilt from the x column).
/// Dissipation totals and monitor maxima are restored by the caller from the
/// functional table.
Trajectory read_trajectory_csv(const std::string& path);

void write_functionals_csv(const std::string& path,
                           const std::vector<FunctionalReport>& rows,
                           const std::vector<MonitorSample>& monitors);

/// Restores per-snapshot dissipation totals and monitor samples.
void read_functionals_csv(const std::string& path, Trajectory& traj);

void write_boundary_csv(const std::string& path, const Trajectory& traj);

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const Trajectory& traj);

/// Restores run metadata (bounds, horizons, monitors, halt reason) into a
/// trajectory read back from CSV. Returns the embedded config echo.
RunConfig read_manifest(const std::string& path, Trajectory& traj);

void write_verification_json(const std::string& path,
                             const VerificationReport& rep);

/// gnuplot script referencing the CSV artifacts; no plotting dependency.
void write_plot_script(const std::string& path);

}  // namespace fbns
