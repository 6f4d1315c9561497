#include "shadowplan/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace shadowplan {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("not a number");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("not an integer");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("not a boolean");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out;
}

struct Entry {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Entry real(std::string key, double ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_double(v); },
          [member](const ExperimentConfig& c) { return fmt(c.*member); }};
}

template <typename S>
Entry real(std::string key, S ExperimentConfig::*outer, double S::*member) {
  return {std::move(key),
          [outer, member](ExperimentConfig& c, const std::string& v) { (c.*outer).*member = parse_double(v); },
          [outer, member](const ExperimentConfig& c) { return fmt((c.*outer).*member); }};
}

template <typename S>
Entry flag(std::string key, S ExperimentConfig::*outer, bool S::*member) {
  return {std::move(key),
          [outer, member](ExperimentConfig& c, const std::string& v) { (c.*outer).*member = parse_bool(v); },
          [outer, member](const ExperimentConfig& c) { return std::string((c.*outer).*member ? "true" : "false"); }};
}

Entry flag(std::string key, bool ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_bool(v); },
          [member](const ExperimentConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

Entry reals(std::string key, std::vector<double> ExperimentConfig::*member) {
  return {std::move(key),
          [member](ExperimentConfig& c, const std::string& v) {
            std::vector<double> out;
            for (const auto& s : split_list(v)) out.push_back(parse_double(s));
            c.*member = out;
          },
          [member](const ExperimentConfig& c) { return join(c.*member, fmt); }};
}

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double rad(double deg) { return deg * std::numbers::pi / 180.0; }

const std::vector<Entry>& registry() {
  using C = ExperimentConfig;
  static const std::vector<Entry> entries = {
      {"scenario.preset", [](C& c, const std::string& v) { c.preset = v; }, [](const C& c) { return c.preset; }},
      real("scenario.half_width", &C::half_width),
      {"scenario.blob_count", [](C& c, const std::string& v) { c.blob_count = parse_int<int>(v); },
       [](const C& c) { return std::to_string(c.blob_count); }},
      real("scenario.blob_radius_min", &C::blob_radius_min),
      real("scenario.blob_radius_max", &C::blob_radius_max),
      real("scenario.blob_speed_max", &C::blob_speed_max),
      real("scenario.blob_min_gap", &C::blob_min_gap),
      real("scenario.blob_speed_min", &C::blob_speed_min),
      real("scenario.blob_lateral_spread", &C::blob_lateral_spread),
      real("scenario.wind_heading_deg", &C::wind_heading_deg),
      real("scenario.wind_spread_deg", &C::wind_spread_deg),
      {"planner", [](C& c, const std::string& v) { c.planner = planner_from_name(v); },
       [](const C& c) { return planner_name(c.planner); }},
      {"runs", [](C& c, const std::string& v) { c.runs = parse_int<int>(v); },
       [](const C& c) { return std::to_string(c.runs); }},
      {"seed", [](C& c, const std::string& v) { c.seed = parse_int<std::uint64_t>(v); },
       [](const C& c) { return std::to_string(c.seed); }},
      real("noise.sigma", &C::noise_sigma),
      {"output.dir", [](C& c, const std::string& v) { c.output_dir = v; }, [](const C& c) { return c.output_dir; }},
      flag("output.timing", &C::timing),

      real("kin.v0", &C::limits, &KinematicLimits::v0),
      real("kin.dt", &C::limits, &KinematicLimits::dt),
      real("kin.omega_max", &C::limits, &KinematicLimits::omega_max),
      real("kin.theta_min", &C::limits, &KinematicLimits::theta_min),
      real("kin.theta_max", &C::limits, &KinematicLimits::theta_max),
      real("kin.h_min", &C::limits, &KinematicLimits::h_min),
      real("kin.h_max", &C::limits, &KinematicLimits::h_max),

      real("guidance.cruise_altitude", &C::guidance, &GuidanceSettings::cruise_altitude),
      real("guidance.altitude_gain", &C::guidance, &GuidanceSettings::altitude_gain),
      real("guidance.altitude_hold_max", &C::guidance, &GuidanceSettings::altitude_hold_max),
      {"guidance.normal_gain", [](C& c, const std::string& v) { c.guidance.reference.normal_gain = parse_double(v); },
       [](const C& c) { return fmt(c.guidance.reference.normal_gain); }},
      {"guidance.max_blend", [](C& c, const std::string& v) { c.guidance.reference.max_blend = parse_double(v); },
       [](const C& c) { return fmt(c.guidance.reference.max_blend); }},
      real("dfaa.target_altitude", &C::guidance, &GuidanceSettings::dfaa_target_altitude),
      real("dfaa.softness", &C::guidance, &GuidanceSettings::dfaa_softness),

      real("ifds.rho", &C::ifds, &IfdsParams::rho),
      real("ifds.sigma_n", &C::ifds, &IfdsParams::sigma_n),
      real("ifds.eta", &C::ifds, &IfdsParams::eta),
      real("ifds.tau", &C::ifds, &IfdsParams::tau),

      {"mpc.N", [](C& c, const std::string& v) { c.mpc.horizon = parse_int<int>(v); },
       [](const C& c) { return std::to_string(c.mpc.horizon); }},
      real("mpc.lambda_tracking", &C::mpc, &MpcConfig::lambda_tracking),
      real("mpc.lambda_obstacle", &C::mpc, &MpcConfig::lambda_obstacle),
      real("mpc.lambda_smoothness", &C::mpc, &MpcConfig::lambda_smoothness),
      real("mpc.mu_heading", &C::mpc, &MpcConfig::mu_heading),
      real("mpc.mu_pitch", &C::mpc, &MpcConfig::mu_pitch),
      real("mpc.gamma_safe", &C::mpc, &MpcConfig::gamma_safe),
      reals("mpc.grid_rho", &C::grid_rho),
      reals("mpc.grid_sigma_n", &C::grid_sigma),
      reals("mpc.grid_eta", &C::grid_eta),

      real("pid.kp", &C::pid, &PidGains::kp),
      real("pid.ki", &C::pid, &PidGains::ki),
      real("pid.kd", &C::pid, &PidGains::kd),
      real("pid.kp_alt", &C::pid, &PidGains::kp_alt),
      real("pid.kd_alt", &C::pid, &PidGains::kd_alt),
      real("pid.integral_clamp", &C::pid, &PidGains::integral_clamp),
      real("pid.max_offset", &C::pid, &PidGains::max_offset),
      flag("avoid.enabled", &C::avoidance, &AvoidanceSettings::enabled),
      real("avoid.warning_gamma", &C::avoidance, &AvoidanceSettings::warning_gamma),
      real("avoid.speed_factor", &C::avoidance, &AvoidanceSettings::speed_factor),

      real("ekf.accel_sigma", &C::track_noise, &TrackNoise::accel_sigma),
      real("ekf.radius_accel_sigma", &C::track_noise, &TrackNoise::radius_accel_sigma),
      real("ekf.center_sigma", &C::track_noise, &TrackNoise::center_sigma),
      real("ekf.radius_sigma", &C::track_noise, &TrackNoise::radius_sigma),
      real("obstacle.inflation", &C::planner_shape, &ObstacleShape::inflation),
      real("obstacle.altitude", &C::obstacle_altitude),
      real("obstacle.thickness", &C::obstacle_thickness),

      {"camera.fov_deg", [](C& c, const std::string& v) { c.camera.fov = rad(parse_double(v)); },
       [](const C& c) { return fmt(deg(c.camera.fov)); }},
      real("camera.gsd_slope", &C::camera, &CameraModel::gsd_slope),

      flag("sim.stop_on_collision", &C::stop_on_collision),
      real("sim.budget_factor", &C::budget_factor),
      real("sim.executed_penalty_cap", &C::executed_penalty_cap),
      {"sweep.horizons",
       [](C& c, const std::string& v) {
         std::vector<int> out;
         for (const auto& s : split_list(v)) out.push_back(parse_int<int>(s));
         c.sweep_horizons = out;
       },
       [](const C& c) { return join(c.sweep_horizons, [](int n) { return std::to_string(n); }); }},
      reals("robustness.sigmas", &C::robustness_sigmas),
  };
  return entries;
}

}  // namespace

PlannerKind planner_from_name(const std::string& name) {
  if (name == "pid") return PlannerKind::pid;
  if (name == "ifds") return PlannerKind::ifds;
  if (name == "ifds_mpc") return PlannerKind::ifds_mpc;
  throw ConfigError("unknown planner '" + name + "' (expected pid, ifds or ifds_mpc)");
}

std::string planner_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::pid:
      return "pid";
    case PlannerKind::ifds:
      return "ifds";
    case PlannerKind::ifds_mpc:
      return "ifds_mpc";
  }
  return "ifds_mpc";
}

void ExperimentConfig::sync_grid() {
  mpc.candidates = candidate_grid(grid_rho, grid_sigma, grid_eta, ifds.tau);
  planner_shape.thickness = obstacle_thickness;
}

void ExperimentConfig::validate() const {
  try {
    preset_by_name(preset);
    limits.validate();
    ifds.validate();
    mpc.validate();
    pid.validate();
    camera.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise.sigma must be non-negative");
  if (!(planner_shape.inflation >= 1.0)) throw ConfigError("obstacle.inflation must be >= 1");
  if (!(obstacle_thickness > 0.0)) throw ConfigError("obstacle.thickness must be positive");
  if (!(budget_factor >= 1.0)) throw ConfigError("sim.budget_factor must be >= 1");
  if (guidance.cruise_altitude < limits.h_min || guidance.cruise_altitude > limits.h_max) {
    throw ConfigError("guidance.cruise_altitude must lie in [kin.h_min, kin.h_max]");
  }
  for (int n : sweep_horizons) {
    if (n < 1) throw ConfigError("sweep.horizons entries must be >= 1");
  }
  for (double s : robustness_sigmas) {
    if (!(s >= 0.0)) throw ConfigError("robustness.sigmas entries must be non-negative");
  }
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& e : registry()) out += e.key + " = " + e.get(*this) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.key);
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, const Entry*> by_key;
  for (const auto& e : registry()) by_key[e.key] = &e;

  ExperimentConfig cfg;
  std::vector<std::string> unknown;
  std::vector<std::string> bad;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      unknown.push_back(key);
      continue;
    }
    try {
      it->second->set(cfg, value);
    } catch (const std::exception& e) {
      bad.push_back(key + " ('" + value + "'): " + e.what());
    }
  }
  if (!unknown.empty() || !bad.empty()) {
    std::string msg;
    if (!unknown.empty()) msg += "unknown config keys: " + join(unknown, [](const std::string& s) { return s; });
    if (!bad.empty()) {
      if (!msg.empty()) msg += "; ";
      msg += "invalid values: " + join(bad, [](const std::string& s) { return s; });
    }
    throw ConfigError(msg);
  }
  cfg.sync_grid();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace shadowplan
