#include "shadowplan/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace shadowplan {

void PidGains::validate() const {
  for (double g : {kp, ki, kd, kp_alt, kd_alt, max_offset}) {
    if (!(g >= 0.0)) throw Error("pid: gains must be non-negative");
  }
  if (!(integral_clamp > 0.0)) throw Error("pid: integral clamp must be positive");
}

UavState pid_step(const UavState& state, PidMemory& memory, const ChannelGeometry& channel, const PidGains& gains,
                  const KinematicLimits& limits, double cruise, const std::optional<SteeringOverride>& override) {
  const auto proj = channel.centerline().project(state.position);
  const double track_heading = std::atan2(proj.tangent.y(), proj.tangent.x());
  const double e = proj.cross_track;
  const double speed = override ? override->speed : limits.v0;

  double heading = state.heading;
  if (override) {
    heading = wrap_angle(state.heading + std::clamp(override->turn_rate, -limits.omega_max, limits.omega_max) * limits.dt);
  } else {
    memory.integral = std::clamp(memory.integral + e * limits.dt, -gains.integral_clamp, gains.integral_clamp);
    const double e_rate = speed * std::cos(state.pitch) * std::sin(wrap_angle(state.heading - track_heading));
    const double offset =
        std::clamp(-(gains.kp * e + gains.ki * memory.integral + gains.kd * e_rate), -gains.max_offset, gains.max_offset);
    const double turn = std::clamp(wrap_angle(track_heading + offset - state.heading), -limits.max_turn_step(),
                                   limits.max_turn_step());
    heading = wrap_angle(state.heading + turn);
  }

  const double z_rate = speed * std::sin(state.pitch);
  const double vz_cmd = gains.kp_alt * (cruise - state.position.z()) - gains.kd_alt * z_rate;
  const double pitch_cmd = std::atan2(vz_cmd, speed);
  UavState probe = state;
  probe.heading = heading;
  const LimitedAttitude att = limit_attitude(probe, heading, pitch_cmd, speed, limits);

  UavState next = state;
  next.heading = heading;
  next.pitch = att.pitch;
  next.speed = speed;
  next.position = state.position + speed * limits.dt * direction_from_angles(heading, att.pitch);
  next.time = state.time + limits.dt;
  return next;
}

std::optional<SteeringOverride> simple_avoidance(const UavState& state,
                                                 std::span<const SuperEllipsoidObstacle> obstacles,
                                                 const AvoidanceSettings& settings, const KinematicLimits& limits) {
  if (!settings.enabled || obstacles.empty()) return std::nullopt;
  const NearestObstacle near = min_gamma(state.position, obstacles);
  if (!(near.gamma < settings.warning_gamma)) return std::nullopt;
  const Vec3 g = gamma_gradient(state.position, obstacles[near.index]);
  SteeringOverride o;
  o.speed = settings.speed_factor * limits.v0;
  if (g.head<2>().norm() < 1e-12) {
    o.turn_rate = limits.omega_max;
    return o;
  }
  const double away = std::atan2(g.y(), g.x());
  o.turn_rate = wrap_angle(away - state.heading) >= 0.0 ? limits.omega_max : -limits.omega_max;
  return o;
}

UavState ifds_only_step(const UavState& state, const GuidanceContext& ctx, const IfdsParams& params,
                        const KinematicLimits& limits, const GuidanceSettings& settings, GuidanceOutput* out) {
  const GuidanceOutput g = total_guidance(state, ctx, params, limits, settings);
  if (out != nullptr) *out = g;
  return advance(state, g, limits);
}

}  // namespace shadowplan
