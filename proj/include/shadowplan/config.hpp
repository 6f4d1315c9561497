#pragma once

#include "shadowplan/baselines.hpp"
#include "shadowplan/ekf.hpp"
#include "shadowplan/guidance.hpp"
#include "shadowplan/ifds.hpp"
#include "shadowplan/metrics.hpp"
#include "shadowplan/mpc.hpp"
#include "shadowplan/scenario.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace shadowplan {

/// Raised for malformed or unknown configuration entries.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class PlannerKind { pid, ifds, ifds_mpc };

PlannerKind planner_from_name(const std::string& name);
std::string planner_name(PlannerKind kind);

struct ExperimentConfig {
  ExperimentConfig() { sync_grid(); }

  std::string preset{"dense"};
  /// optional override of the preset's channel half-width; <= 0 keeps the preset value
  double half_width{0.0};
  /// optional overrides of the preset's random blob population; negative keeps the preset value
  int blob_count{-1};
  double blob_radius_min{-1.0};
  double blob_radius_max{-1.0};
  double blob_speed_max{-1.0};
  double blob_min_gap{-1.0};
  double blob_speed_min{-1.0};
  double blob_lateral_spread{-1.0};
  /// wind heading in degrees; NaN keeps the preset value
  double wind_heading_deg{std::numeric_limits<double>::quiet_NaN()};
  double wind_spread_deg{std::numeric_limits<double>::quiet_NaN()};
  PlannerKind planner{PlannerKind::ifds_mpc};
  int runs{50};
  std::uint64_t seed{1};
  double noise_sigma{0.0};
  std::string output_dir{"out"};
  bool timing{false};

  KinematicLimits limits;
  GuidanceSettings guidance;
  IfdsParams ifds;
  MpcConfig mpc;
  std::vector<double> grid_rho{1.0, 1.5, 2.5};
  std::vector<double> grid_sigma{1.0, 1.5, 2.5};
  std::vector<double> grid_eta{0.0, 0.3, 0.6};
  PidGains pid;
  AvoidanceSettings avoidance;
  TrackNoise track_noise;
  ObstacleShape planner_shape;
  double obstacle_altitude{100.0};
  double obstacle_thickness{10.0};
  CameraModel camera;
  bool stop_on_collision{true};
  double budget_factor{3.0};
  /// phi cap used when scoring executed paths
  double executed_penalty_cap{100.0};
  std::vector<int> sweep_horizons{5, 10, 20, 30};
  std::vector<double> robustness_sigmas{0.0, 1.0, 3.0};

  /// Rebuilds the MPC candidate list from the grid vectors.
  void sync_grid();
  void validate() const;
  /// Canonical `key = value` text, parseable by parse_config.
  std::string to_text() const;
};

/// Parses flat `key = value` text; `#` starts a comment. Unknown keys and
/// malformed values raise ConfigError naming every offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every recognised key, in canonical order.
std::vector<std::string> config_keys();

}  // namespace shadowplan
