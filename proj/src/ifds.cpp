#include "shadowplan/ifds.hpp"

#include <algorithm>
#include <cmath>

namespace shadowplan {

void KinematicLimits::validate() const {
  if (!(omega_max > 0.0)) throw Error("limits: omega_max must be positive");
  if (!(theta_min < theta_max)) throw Error("limits: theta_min must be below theta_max");
  if (!(h_min < h_max)) throw Error("limits: h_min must be below h_max");
  if (!(v0 > 0.0)) throw Error("limits: v0 must be positive");
  if (!(dt > 0.0)) throw Error("limits: dt must be positive");
}

void IfdsParams::validate() const {
  if (!(rho > 0.0)) throw Error("ifds: rho must be positive");
  if (!(sigma_n > 0.0)) throw Error("ifds: sigma_n must be positive");
  if (!(eta >= 0.0)) throw Error("ifds: eta must be non-negative");
  if (!(tau > 0.0)) throw Error("ifds: tau must be positive");
}

Vec3 direction_from_angles(double heading, double pitch) {
  const double cp = std::cos(pitch);
  return {cp * std::cos(heading), cp * std::sin(heading), std::sin(pitch)};
}

Vec3 tangent_direction(const Vec3& n, const Vec3& flow, const Vec3& motion) {
  Vec3 t = n.cross(Vec3::UnitZ());
  if (t.norm() < 1e-6) t = n.cross(Vec3::UnitX());
  t.normalize();
  double side = t.dot(motion);
  if (side == 0.0) side = t.dot(flow);
  if (n.dot(flow) * side < 0.0) t = -t;
  return t;
}

Mat3 modulation_matrix(const Vec3& p, const SuperEllipsoidObstacle& obs, const IfdsParams& params, const Vec3& flow,
                       const Vec3& motion) {
  const Vec3 grad = gamma_gradient(p, obs);
  const double gn = grad.norm();
  if (!(gn >= 1e-12)) throw Error("degenerate normal");
  const Vec3 n = grad / gn;
  const Vec3 t = tangent_direction(n, flow, motion);
  const double gamma = gamma_value(p, obs);
  const double w = std::pow(gamma, -1.0 / params.sigma_n);
  const double g = std::pow(gamma, -1.0 / params.rho);
  return Mat3::Identity() - w * n * n.transpose() + (g / params.rho) * t * n.transpose();
}

Mat3 flow_modulation(const Vec3& p, const SuperEllipsoidObstacle& obs, const IfdsParams& params, const Vec3& flow,
                     const Vec3& motion) {
  if (gamma_value(p, obs) <= 1.0 && gamma_gradient(p, obs).dot(flow) >= 0.0) return Mat3::Identity();
  return modulation_matrix(p, obs, params, flow, motion);
}

Vec3 normalize_with_drift(const Vec3& w, const Vec3& drift, double speed) {
  const double ww = w.squaredNorm();
  if (ww > 1e-24) {
    // beta^2 |w|^2 + 2 beta w.v + |v|^2 - V^2 = 0, positive root
    const double wv = w.dot(drift);
    const double disc = wv * wv - ww * (drift.squaredNorm() - speed * speed);
    if (disc >= 0.0) {
      const double beta = (-wv + std::sqrt(disc)) / ww;
      if (beta > 0.0) {
        const Vec3 out = beta * w + drift;
        const double n = out.norm();
        if (n > 0.0) return out * (speed / n);
      }
    }
  }
  const Vec3 sum = w + drift;
  const double n = sum.norm();
  if (n > 0.0) return sum * (speed / n);
  return Vec3::Zero();
}

Vec3 modulate_velocity(const Vec3& p, const Vec3& u, std::span<const SuperEllipsoidObstacle> obstacles,
                       const IfdsParams& params, const KinematicLimits& limits) {
  return modulate_velocity(p, u, u, obstacles, params, limits);
}

Vec3 modulate_velocity(const Vec3& p, const Vec3& u, const Vec3& motion,
                       std::span<const SuperEllipsoidObstacle> obstacles, const IfdsParams& params,
                       const KinematicLimits& limits) {
  const double un = u.norm();
  if (!(un > 0.0) || !u.allFinite()) throw Error("modulate_velocity: nominal velocity must be finite and nonzero");
  if (obstacles.empty()) return u * (limits.v0 / un);
  const NearestObstacle near = min_gamma(p, obstacles);
  if (near.gamma >= kFarFieldGamma) return u * (limits.v0 / un);
  const auto& obs = obstacles[near.index];
  const Vec3 rel = u - obs.velocity;
  const Mat3 m = flow_modulation(p, obs, params, rel, motion - obs.velocity);
  return normalize_with_drift(m * rel, obs.velocity, limits.v0);
}

double effective_width(const Vec3& p, const ChannelGeometry& channel, const ShadowMap& shadows) {
  const auto proj = channel.centerline().project(p);
  const double hw = channel.half_width();
  const double res = channel.cell_size();
  // beyond either end of the centerline the foot point leaves a residual along the tangent
  const double along = (p - proj.point).head<2>().dot(proj.tangent.head<2>());
  if (std::abs(along) > 0.5 * res || std::abs(proj.cross_track) > hw) return 0.0;
  const auto cells = static_cast<int>(std::floor(2.0 * hw / res));
  int run = 0;
  int best = 0;
  for (int k = 0; k < cells; ++k) {
    const double off = -hw + (k + 0.5) * res;
    const Vec3 q = proj.point + off * proj.left;
    if (shadows.shadowed(q.x(), q.y())) {
      run = 0;
    } else {
      best = std::max(best, ++run);
    }
  }
  return best * res;
}

bool dfaa_gate(double w_eff, const IfdsParams& params, const Vec3& p, const KinematicLimits& limits) {
  return w_eff < params.tau && p.z() - limits.v0 * limits.dt >= limits.h_min;
}

Mat3 apply_dfaa(const Mat3& m, double w_eff, const IfdsParams& params, const Vec3& p, const KinematicLimits& limits) {
  if (!dfaa_gate(w_eff, params, p, limits)) return m;
  Mat3 out = m;
  out(2, 2) -= params.eta;
  return out;
}

}  // namespace shadowplan
