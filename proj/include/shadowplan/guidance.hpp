#pragma once

#include "shadowplan/ifds.hpp"
#include "shadowplan/scenario.hpp"

#include <span>

namespace shadowplan {

struct GuidanceSettings {
  ReferenceFieldParams reference;
  double cruise_altitude{100.0};
  /// vertical/horizontal ratio commanded per metre of altitude error
  double altitude_gain{0.05};
  double altitude_hold_max{0.2};
  /// altitude the descent bias settles at
  double dfaa_target_altitude{55.0};
  /// length scale (m) over which the descent bias fades out near the target
  double dfaa_softness{5.0};
};

/// Snapshot the guidance law is evaluated against.
struct GuidanceContext {
  const ChannelGeometry* channel{nullptr};
  std::span<const SuperEllipsoidObstacle> obstacles;
  /// compute W_eff even when the descent gain is zero
  bool report_width{false};
};

struct GuidanceOutput {
  /// commanded velocity after limits, |velocity| = v0
  Vec3 velocity{Vec3::Zero()};
  /// reference velocity before modulation
  Vec3 nominal{Vec3::Zero()};
  double heading{0.0};
  double pitch{0.0};
  bool dfaa_active{false};
  /// NaN when not computed
  double w_eff{0.0};
};

/// Vertical perturbation of the descent mode: -eta v0 tanh(k h (h^2 - H^2)) above H, zero below.
double descent_bias(double altitude, double eta, const KinematicLimits& limits, const GuidanceSettings& settings);

/// Reference direction, nominal velocity, modulation with the descent
/// bias, then turn/climb/altitude limits relative to the current state.
GuidanceOutput total_guidance(const UavState& uav, const GuidanceContext& ctx, const IfdsParams& params,
                              const KinematicLimits& limits, const GuidanceSettings& settings);

/// One Euler step along `out`, at the vehicle speed v0.
UavState advance(const UavState& uav, const GuidanceOutput& out, const KinematicLimits& limits);

/// Heading/pitch after applying the turn-rate limit (to both angles), the
/// climb-angle range and the altitude band.
struct LimitedAttitude {
  double heading;
  double pitch;
};
LimitedAttitude limit_attitude(const UavState& uav, double heading_cmd, double pitch_cmd, double speed,
                               const KinematicLimits& limits);

}  // namespace shadowplan
