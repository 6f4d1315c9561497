#include "shadowplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shadowplan {

namespace {

double clamp_ratio(double ratio) { return std::clamp(ratio, -kMaxBaseRatio, kMaxBaseRatio); }

// ratio^(2n) by repeated squaring of the square
double even_power(double ratio, int n) {
  const double sq = ratio * ratio;
  double out = sq;
  for (int i = 1; i < n; ++i) out *= sq;
  return out;
}

// d/dratio of ratio^(2n) = 2n * ratio^(2n-1)
double even_power_derivative(double ratio, int n) {
  double out = 2.0 * n * ratio;
  const double sq = ratio * ratio;
  for (int i = 1; i < n; ++i) out *= sq;
  return out;
}

struct LocalFrame {
  double x, y, z;
  double cos_yaw, sin_yaw;
};

LocalFrame to_local(const Vec3& point, const SuperEllipsoidObstacle& obs) {
  const Vec3 d = point - obs.center;
  const double cy = std::cos(obs.yaw);
  const double sy = std::sin(obs.yaw);
  return {cy * d.x() + sy * d.y(), -sy * d.x() + cy * d.y(), d.z(), cy, sy};
}

bool valid_exponent(int e) { return e >= 1 && e <= kMaxShapeExponent; }

}  // namespace

void SuperEllipsoidObstacle::validate() const {
  if (!center.allFinite() || !velocity.allFinite() || !std::isfinite(yaw)) {
    throw Error("obstacle: non-finite state");
  }
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) throw Error("obstacle: semi-axes must be positive");
  if (!(inflate_a >= 1.0) || !(inflate_b >= 1.0) || !(inflate_c >= 1.0)) {
    throw Error("obstacle: inflation factors must be >= 1");
  }
  if (!valid_exponent(p) || !valid_exponent(q) || !valid_exponent(r)) {
    throw Error("obstacle: shape exponents must be integers in [1, 4]");
  }
  if (c > std::min(a, b)) throw Error("obstacle: thickness c must not exceed min(a, b)");
}

double gamma_value(const Vec3& point, const SuperEllipsoidObstacle& obs) {
  const LocalFrame l = to_local(point, obs);
  const double rx = clamp_ratio(l.x / (obs.inflate_a * obs.a));
  const double ry = clamp_ratio(l.y / (obs.inflate_b * obs.b));
  const double rz = clamp_ratio(l.z / (obs.inflate_c * obs.c));
  return even_power(rx, obs.p) + even_power(ry, obs.q) + even_power(rz, obs.r);
}

Vec3 gamma_gradient(const Vec3& point, const SuperEllipsoidObstacle& obs) {
  if (point == obs.center) return Vec3::Zero();
  const LocalFrame l = to_local(point, obs);
  const double sa = obs.inflate_a * obs.a;
  const double sb = obs.inflate_b * obs.b;
  const double sc = obs.inflate_c * obs.c;
  const double gx = even_power_derivative(clamp_ratio(l.x / sa), obs.p) / sa;
  const double gy = even_power_derivative(clamp_ratio(l.y / sb), obs.q) / sb;
  const double gz = even_power_derivative(clamp_ratio(l.z / sc), obs.r) / sc;
  // rotate back to world: local = R(-yaw) * world, so world = R(yaw) * local
  return {l.cos_yaw * gx - l.sin_yaw * gy, l.sin_yaw * gx + l.cos_yaw * gy, gz};
}

bool is_feasible(const Vec3& point, std::span<const SuperEllipsoidObstacle> obstacles) {
  return std::all_of(obstacles.begin(), obstacles.end(),
                     [&](const auto& obs) { return gamma_value(point, obs) > 1.0; });
}

NearestObstacle min_gamma(const Vec3& point, std::span<const SuperEllipsoidObstacle> obstacles) {
  if (obstacles.empty()) throw Error("no obstacles");
  NearestObstacle best{gamma_value(point, obstacles[0]), 0};
  for (std::size_t i = 1; i < obstacles.size(); ++i) {
    const double g = gamma_value(point, obstacles[i]);
    if (g < best.gamma) best = {g, i};
  }
  return best;
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  if (w > std::numbers::pi) w -= two_pi;
  return w;
}

}  // namespace shadowplan
