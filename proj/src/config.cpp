#include "fbns/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fbns {

using nlohmann::json;

namespace {

template <typename T>
void read_to(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "power_law") return ProfileKind::PowerLaw;
  if (s == "uniform") return ProfileKind::Uniform;
  throw ConfigError("unknown profile kind '" + s + "'");
}

VelocityKind parse_velocity_kind(const std::string& s) {
  if (s == "zero") return VelocityKind::Zero;
  if (s == "bump") return VelocityKind::Bump;
  throw ConfigError("unknown velocity kind '" + s + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("params")) {
      const json& p = j["params"];
      read_to(p, "dim", cfg.params.dim);
      read_to(p, "gamma", cfg.params.gamma);
      read_to(p, "theta", cfg.params.theta);
      read_to(p, "sigma", cfg.params.sigma);
      read_to(p, "m", cfg.params.m);
      read_to(p, "rho_star_lo", cfg.params.rho_star_lo);
      read_to(p, "rho_star_hi", cfg.params.rho_star_hi);
      read_to(p, "a0", cfg.params.a0);
    }
    if (j.contains("profile")) {
      const json& p = j["profile"];
      if (p.contains("kind"))
        cfg.profile.kind = parse_profile_kind(p["kind"].get<std::string>());
      if (p.contains("u0")) {
        const json& u = p["u0"];
        if (u.contains("kind"))
          cfg.profile.u0.kind =
              parse_velocity_kind(u["kind"].get<std::string>());
        read_to(u, "amplitude", cfg.profile.u0.amplitude);
        read_to(u, "center", cfg.profile.u0.center);
        read_to(u, "width", cfg.profile.u0.width);
      }
    }
    if (j.contains("grid")) {
      long cells = cfg.cells;
      read_to(j["grid"], "cells", cells);
      cfg.cells = cells;
    }
    if (j.contains("time")) {
      const json& t = j["time"];
      read_opt(t, "horizon", cfg.horizon);
      read_to(t, "t1a_factor", cfg.t1a_factor);
      read_to(t, "safety", cfg.safety);
    }
    if (j.contains("output")) read_to(j["output"], "snapshots", cfg.snapshots);
    if (j.contains("monitors")) {
      read_opt(j["monitors"], "m0", cfg.m0);
      read_opt(j["monitors"], "m1", cfg.m1);
    }
    if (j.contains("region")) {
      const json& r = j["region"];
      read_to(r, "x0", cfg.region.x0);
      read_to(r, "x2", cfg.region.x2);
      read_to(r, "x1", cfg.region.x1);
      read_to(r, "x_cut", cfg.region.x_cut);
      read_to(r, "ramp", cfg.region.ramp);
    }
    if (j.contains("verify")) {
      const json& v = j["verify"];
      read_to(v, "c1", cfg.tol.c1);
      read_to(v, "c2", cfg.tol.c2);
      read_opt(v, "lambda0", cfg.lambda0);
      read_to(v, "cap_factor", cfg.cap_factor);
    }
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  if (cfg.cells < 16)
    throw ConfigError(origin + ": grid.cells must be at least 16");
  if (cfg.horizon && !(*cfg.horizon > 0.0))
    throw ConfigError(origin + ": time.horizon must be positive");
  if (!cfg.horizon && !(cfg.t1a_factor > 0.0))
    throw ConfigError(origin + ": time.t1a_factor must be positive");
  if (cfg.snapshots < 1)
    throw ConfigError(origin + ": output.snapshots must be positive");
  if (!(cfg.safety > 0.0 && cfg.safety <= 1.0))
    throw ConfigError(origin + ": time.safety must lie in (0,1]");
  try {
    cfg.region.validate();
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["params"] = {{"dim", cfg.params.dim},
                 {"gamma", cfg.params.gamma},
                 {"theta", cfg.params.theta},
                 {"sigma", cfg.params.sigma},
                 {"m", cfg.params.m},
                 {"rho_star_lo", cfg.params.rho_star_lo},
                 {"rho_star_hi", cfg.params.rho_star_hi},
                 {"a0", cfg.params.a0}};
  j["profile"] = {
      {"kind", to_string(cfg.profile.kind)},
      {"u0",
       {{"kind", cfg.profile.u0.kind == VelocityKind::Zero ? "zero" : "bump"},
        {"amplitude", cfg.profile.u0.amplitude},
        {"center", cfg.profile.u0.center},
        {"width", cfg.profile.u0.width}}}};
  j["grid"] = {{"cells", cfg.cells}};
  j["time"] = {{"t1a_factor", cfg.t1a_factor}, {"safety", cfg.safety}};
  if (cfg.horizon) j["time"]["horizon"] = *cfg.horizon;
  j["output"] = {{"snapshots", cfg.snapshots}};
  j["monitors"] = json::object();
  if (cfg.m0) j["monitors"]["m0"] = *cfg.m0;
  if (cfg.m1) j["monitors"]["m1"] = *cfg.m1;
  j["region"] = {{"x0", cfg.region.x0},
                 {"x2", cfg.region.x2},
                 {"x1", cfg.region.x1},
                 {"x_cut", cfg.region.x_cut},
                 {"ramp", cfg.region.ramp}};
  j["verify"] = {{"c1", cfg.tol.c1},
                 {"c2", cfg.tol.c2},
                 {"cap_factor", cfg.cap_factor}};
  if (cfg.lambda0) j["verify"]["lambda0"] = *cfg.lambda0;
  return j.dump(2);
}

}  // namespace fbns
