#pragma once

#include "shadowplan/guidance.hpp"
#include "shadowplan/ifds.hpp"
#include "shadowplan/scenario.hpp"

#include <optional>
#include <span>

namespace shadowplan {

struct PidGains {
  double kp{0.02};  ///< rad per metre of cross-track error
  double ki{0.0005};
  double kd{0.06};  ///< rad per (m/s)
  double kp_alt{0.05};
  double kd_alt{0.2};
  double integral_clamp{50.0};  ///< m s
  /// largest heading offset from the channel tangent (rad)
  double max_offset{0.8};

  void validate() const;
};

struct PidMemory {
  double integral{0.0};
};

struct AvoidanceSettings {
  bool enabled{true};
  double warning_gamma{2.0};
  double speed_factor{0.7};
};

struct SteeringOverride {
  double turn_rate{0.0};  ///< rad/s, signed
  double speed{0.0};
};

/// Lateral PID on the signed cross-track error, altitude held at `cruise`.
/// An override replaces the lateral command and the speed.
UavState pid_step(const UavState& state, PidMemory& memory, const ChannelGeometry& channel, const PidGains& gains,
                  const KinematicLimits& limits, double cruise, const std::optional<SteeringOverride>& override = {});

/// Full-rate turn away from the nearest obstacle with a speed cut when its
/// Gamma falls below the warning level. "Away" follows +grad Gamma, which
/// points out of the obstacle.
std::optional<SteeringOverride> simple_avoidance(const UavState& state,
                                                 std::span<const SuperEllipsoidObstacle> obstacles,
                                                 const AvoidanceSettings& settings, const KinematicLimits& limits);

/// Guidance with one fixed parameter set against the current snapshot.
UavState ifds_only_step(const UavState& state, const GuidanceContext& ctx, const IfdsParams& params,
                        const KinematicLimits& limits, const GuidanceSettings& settings,
                        GuidanceOutput* out = nullptr);

}  // namespace shadowplan
