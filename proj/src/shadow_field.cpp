#include "shadowplan/shadow_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shadowplan {

namespace {

double even_power(double v, int n) {
  const double sq = v * v;
  double out = sq;
  for (int i = 1; i < n; ++i) out *= sq;
  return out;
}

bool inside_superellipse(double lx, double ly, double a, double b, int e) {
  return even_power(lx / a, e) + even_power(ly / b, e) <= 1.0;
}

}  // namespace

bool BlobState::contains(double px, double py) const {
  const double dx = px - x;
  const double dy = py - y;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return inside_superellipse(c * dx + s * dy, -s * dx + c * dy, a, b, exponent);
}

double BlobState::circumscribed_radius() const {
  if (exponent == 1) return std::max(a, b);
  // boundary parametrisation x = a*sgn(c)|c|^(1/e), y = b*sgn(s)|s|^(1/e)
  double best = std::max(a, b);
  constexpr int kSamples = 256;
  for (int k = 0; k <= kSamples; ++k) {
    const double t = 0.5 * std::numbers::pi * k / kSamples;
    const double px = a * std::pow(std::cos(t), 1.0 / exponent);
    const double py = b * std::pow(std::sin(t), 1.0 / exponent);
    best = std::max(best, std::hypot(px, py));
  }
  return best;
}

BlobState ShadowBlob::at(double t) const {
  const double wob = wobble_amplitude * std::sin(wobble_omega * t + wobble_phase);
  const double pulse = 1.0 + pulse_fraction * std::sin(pulse_omega * t + pulse_phase);
  // wobble acts across the drift direction (or along x for a static blob)
  const double speed = std::hypot(vx, vy);
  const double wx = speed > 0.0 ? -vy / speed : 0.0;
  const double wy = speed > 0.0 ? vx / speed : 1.0;
  BlobState s;
  s.x = x0 + vx * t + wob * wx;
  s.y = y0 + vy * t + wob * wy;
  s.a = a0 * pulse;
  s.b = b0 * pulse;
  s.yaw = yaw;
  s.exponent = exponent;
  return s;
}

double ShadowBlob::max_center_speed() const {
  return std::hypot(vx, vy) + wobble_amplitude * std::abs(wobble_omega);
}

double ShadowBlob::max_axis_rate() const {
  return std::max(a0, b0) * pulse_fraction * std::abs(pulse_omega);
}

BlobShadowMap::BlobShadowMap(std::vector<BlobState> blobs) : blobs_(std::move(blobs)) {
  reach_sq_.reserve(blobs_.size());
  for (const auto& b : blobs_) {
    const double r = b.circumscribed_radius();
    reach_sq_.push_back(r * r);
  }
}

bool BlobShadowMap::shadowed(double x, double y) const {
  for (std::size_t i = 0; i < blobs_.size(); ++i) {
    const double dx = x - blobs_[i].x;
    const double dy = y - blobs_[i].y;
    if (dx * dx + dy * dy > reach_sq_[i]) continue;
    if (blobs_[i].contains(x, y)) return true;
  }
  return false;
}

ObstacleShadowMap::ObstacleShadowMap(std::span<const SuperEllipsoidObstacle> obstacles) : obstacles_(obstacles) {
  reach_sq_.reserve(obstacles_.size());
  for (const auto& o : obstacles_) {
    // the square with half-side max(a, b) encloses every horizontal super-ellipse
    const double r = std::max(o.a, o.b) * std::numbers::sqrt2;
    reach_sq_.push_back(r * r);
  }
}

bool ObstacleShadowMap::shadowed(double x, double y) const {
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const auto& o = obstacles_[i];
    const double dx = x - o.center.x();
    const double dy = y - o.center.y();
    if (dx * dx + dy * dy > reach_sq_[i]) continue;
    const double c = std::cos(o.yaw);
    const double s = std::sin(o.yaw);
    const double lx = c * dx + s * dy;
    const double ly = -s * dx + c * dy;
    if (even_power(lx / o.a, o.p) + even_power(ly / o.b, o.q) <= 1.0) return true;
  }
  return false;
}

}  // namespace shadowplan
