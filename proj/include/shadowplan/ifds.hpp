#pragma once

#include "shadowplan/geometry.hpp"
#include "shadowplan/scenario.hpp"
#include "shadowplan/shadow_field.hpp"

#include <span>
#include <vector>

namespace shadowplan {

/// Maneuverability limits shared by every planner.
struct KinematicLimits {
  double omega_max{0.5};  ///< rad/s
  double theta_min{-0.5};
  double theta_max{0.5};
  double h_min{40.0};
  double h_max{120.0};
  double v0{10.0};
  double dt{0.1};

  double max_turn_step() const { return omega_max * dt; }
  void validate() const;
};

struct IfdsParams {
  double rho{1.5};      ///< repulsion coefficient
  double sigma_n{1.5};  ///< normal weight exponent
  double eta{0.3};      ///< descent guidance gain
  double tau{30.0};     ///< observable-width threshold (m)

  void validate() const;
};

struct UavState {
  Vec3 position{Vec3::Zero()};
  double heading{0.0};
  double pitch{0.0};
  double speed{10.0};
  double time{0.0};
};

/// Discrete path with per-point heading and flight-path angle.
struct Trajectory {
  std::vector<Vec3> points;
  std::vector<double> heading;
  std::vector<double> pitch;

  std::size_t size() const { return points.size(); }
  void push_back(const Vec3& p, double psi, double theta) {
    points.push_back(p);
    heading.push_back(psi);
    pitch.push_back(theta);
  }
};

/// Unit vector for heading psi and flight-path angle theta.
Vec3 direction_from_angles(double heading, double pitch);

/**
 * Modulation matrix of one obstacle at an exterior point:
 *   M = I - w n n^T + (g / rho) t n^T,  w = Gamma^(-1/sigma_n), g = Gamma^(-1/rho).
 * The tangent t lies in the horizontal plane when possible. Its sign makes
 * the tangential term (g/rho) t (n.flow) push the way `motion` already
 * slides past the obstacle, i.e. (n.flow)(t.motion) >= 0. With no sliding
 * component the base orientation n x z is kept.
 */
Mat3 modulation_matrix(const Vec3& p, const SuperEllipsoidObstacle& obs, const IfdsParams& params, const Vec3& flow,
                       const Vec3& motion);
inline Mat3 modulation_matrix(const Vec3& p, const SuperEllipsoidObstacle& obs, const IfdsParams& params,
                              const Vec3& flow) {
  return modulation_matrix(p, obs, params, flow, flow);
}

/**
 * Modulation used by the guidance law: modulation_matrix, except that
 * inside the obstacle (Γ <= 1, reachable only through estimation error)
 * flow that already points outward passes unchanged. There the normal
 * weight exceeds 1 and would turn it back inward.
 */
Mat3 flow_modulation(const Vec3& p, const SuperEllipsoidObstacle& obs, const IfdsParams& params, const Vec3& flow,
                     const Vec3& motion);

/// Unit tangent used by modulation_matrix.
Vec3 tangent_direction(const Vec3& unit_normal, const Vec3& flow, const Vec3& motion);

/// Scales the modulated field so that |beta * w + v| = speed.
Vec3 normalize_with_drift(const Vec3& w, const Vec3& drift, double speed);

/// Beyond this Gamma every obstacle is treated as absent.
inline constexpr double kFarFieldGamma = 1e4;

/// beta M (u - v) + v for the nearest obstacle, rescaled to v0. `motion`
/// is the vehicle's current velocity (defaults to u) and fixes the side
/// on which the obstacle is passed.
Vec3 modulate_velocity(const Vec3& p, const Vec3& u, std::span<const SuperEllipsoidObstacle> obstacles,
                       const IfdsParams& params, const KinematicLimits& limits);
Vec3 modulate_velocity(const Vec3& p, const Vec3& u, const Vec3& motion,
                       std::span<const SuperEllipsoidObstacle> obstacles, const IfdsParams& params,
                       const KinematicLimits& limits);

/// Longest clear run on the cross-channel transect below p, in metres.
/// Zero outside the channel corridor.
double effective_width(const Vec3& p, const ChannelGeometry& channel, const ShadowMap& shadows);

/// Whether the descent bias applies at this width and altitude.
bool dfaa_gate(double w_eff, const IfdsParams& params, const Vec3& p, const KinematicLimits& limits);

/// M + eta diag(0, 0, -1) when the gate holds, M otherwise.
Mat3 apply_dfaa(const Mat3& m, double w_eff, const IfdsParams& params, const Vec3& p, const KinematicLimits& limits);

}  // namespace shadowplan
