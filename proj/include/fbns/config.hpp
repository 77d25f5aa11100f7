#pragma once

#include <optional>
#include <string>

#include "fbns/initial_data.hpp"
#include "fbns/params.hpp"
#include "fbns/verify.hpp"

namespace fbns {

/// Thrown on malformed or out-of-range configuration input; the message
/// carries the file and key involved.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One run, fully described. Deterministic by construction: there is no
/// random state anywhere.
struct RunConfig {
  Params params;
  ProfileSpec profile;
  Index cells = 256;

  std::optional<double> horizon;  ///< absolute final time
  double t1a_factor = 0.5;        ///< used when no absolute horizon is given
  double safety = 0.4;
  int snapshots = 64;

  std::optional<double> m0, m1;  ///< monitor overrides; defaults from data

  RegionSpec region;
  ToleranceModel tol;
  std::optional<double> lambda0;
  double cap_factor = 100.0;

  /// Resolved horizon for built initial data.
  double resolve_horizon(const HorizonEstimate& h) const {
    return horizon ? *horizon : t1a_factor * h.t1a;
  }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);
std::string config_to_json(const RunConfig& cfg);

}  // namespace fbns
