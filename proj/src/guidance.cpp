#include "shadowplan/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shadowplan {

double descent_bias(double altitude, double eta, const KinematicLimits& limits, const GuidanceSettings& settings) {
  const double target = settings.dfaa_target_altitude;
  if (altitude <= target || eta <= 0.0) return 0.0;
  const double k = 1.0 / (target * target * settings.dfaa_softness);
  return -eta * limits.v0 * std::tanh(k * altitude * (altitude * altitude - target * target));
}

LimitedAttitude limit_attitude(const UavState& uav, double heading_cmd, double pitch_cmd, double speed,
                               const KinematicLimits& limits) {
  const double turn = std::clamp(wrap_angle(heading_cmd - uav.heading), -limits.max_turn_step(), limits.max_turn_step());
  const double heading = wrap_angle(uav.heading + turn);
  // pitch changes at most at the turn rate
  const double step = limits.max_turn_step();
  double pitch = std::clamp(std::clamp(pitch_cmd, uav.pitch - step, uav.pitch + step), limits.theta_min,
                            limits.theta_max);
  const double z = uav.position.z();
  const double reach = speed * limits.dt;
  if (reach > 0.0) {
    const double z_next = z + reach * std::sin(pitch);
    if (z_next < limits.h_min) {
      pitch = std::asin(std::clamp((limits.h_min - z) / reach, -1.0, 1.0));
    } else if (z_next > limits.h_max) {
      pitch = std::asin(std::clamp((limits.h_max - z) / reach, -1.0, 1.0));
    }
    pitch = std::clamp(pitch, limits.theta_min, limits.theta_max);
  }
  return {heading, pitch};
}

GuidanceOutput total_guidance(const UavState& uav, const GuidanceContext& ctx, const IfdsParams& params,
                              const KinematicLimits& limits, const GuidanceSettings& settings) {
  if (ctx.channel == nullptr) throw Error("total_guidance: missing channel geometry");
  const Vec3& p = uav.position;
  GuidanceOutput out;
  const Vec3 dir = reference_field(*ctx.channel, p, settings.reference);

  out.w_eff = std::numeric_limits<double>::quiet_NaN();
  if (params.eta > 0.0 || ctx.report_width) {
    out.w_eff = effective_width(p, *ctx.channel, ObstacleShadowMap(ctx.obstacles));
  }
  out.dfaa_active = params.eta > 0.0 && !std::isnan(out.w_eff) && dfaa_gate(out.w_eff, params, p, limits);

  // altitude hold is suspended while the descent mode is engaged
  const double climb = out.dfaa_active ? 0.0
                                       : std::clamp(settings.altitude_gain * (settings.cruise_altitude - p.z()),
                                                    -settings.altitude_hold_max, settings.altitude_hold_max);
  out.nominal = (dir + climb * Vec3::UnitZ()).normalized() * limits.v0;

  Mat3 m = Mat3::Identity();
  Vec3 drift = Vec3::Zero();
  if (!ctx.obstacles.empty()) {
    const NearestObstacle near = min_gamma(p, ctx.obstacles);
    if (near.gamma < kFarFieldGamma) {
      const auto& obs = ctx.obstacles[near.index];
      drift = obs.velocity;
      // the side of the obstacle is taken from how the vehicle is already moving
      const Vec3 motion = uav.speed * direction_from_angles(uav.heading, uav.pitch);
      m = flow_modulation(p, obs, params, out.nominal - drift, motion - drift);
    }
  }
  if (out.dfaa_active) m = apply_dfaa(m, out.w_eff, params, p, limits);
  Vec3 u = normalize_with_drift(m * (out.nominal - drift), drift, limits.v0);

  if (out.dfaa_active) {
    u.z() += descent_bias(p.z(), params.eta, limits, settings);
    u.z() = std::min(u.z(), 0.0);
  }

  double heading_cmd = uav.heading;
  double pitch_cmd = 0.0;
  if (u.head<2>().norm() > 1e-9) {
    heading_cmd = std::atan2(u.y(), u.x());
    pitch_cmd = std::atan2(u.z(), u.head<2>().norm());
  } else if (u.norm() > 0.0) {
    pitch_cmd = u.z() > 0.0 ? limits.theta_max : limits.theta_min;
  }
  const LimitedAttitude att = limit_attitude(uav, heading_cmd, pitch_cmd, limits.v0, limits);
  if (out.dfaa_active) {
    // never climb while the descent mode is engaged
    out.pitch = std::min(att.pitch, 0.0);
  } else {
    out.pitch = att.pitch;
  }
  out.heading = att.heading;
  out.velocity = limits.v0 * direction_from_angles(out.heading, out.pitch);
  return out;
}

UavState advance(const UavState& uav, const GuidanceOutput& out, const KinematicLimits& limits) {
  UavState next = uav;
  next.position = uav.position + out.velocity * limits.dt;
  next.heading = out.heading;
  next.pitch = out.pitch;
  next.speed = limits.v0;
  next.time = uav.time + limits.dt;
  return next;
}

}  // namespace shadowplan
