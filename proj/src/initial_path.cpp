#include "shadowplan/initial_path.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace shadowplan {

namespace {

struct Bulge {
  std::array<double, 3> lateral{};
  double vertical{0.0};
};

Vec3 bulge_point(const Vec3& start, const Vec3& goal, const Vec3& side, const Bulge& shape, double amp, double s) {
  double lat = 0.0;
  for (std::size_t m = 0; m < shape.lateral.size(); ++m) {
    lat += shape.lateral[m] * std::sin(static_cast<double>(m + 1) * std::numbers::pi * s);
  }
  const double vert = shape.vertical * std::sin(std::numbers::pi * s);
  return start + s * (goal - start) + amp * lat * side + amp * vert * Vec3::UnitZ();
}

std::vector<Vec3> dense_curve(const Vec3& start, const Vec3& goal, const Vec3& side, const Bulge& shape, double amp,
                              int samples) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) pts.push_back(bulge_point(start, goal, side, shape, amp, double(i) / samples));
  return pts;
}

double curve_length(const std::vector<Vec3>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

// points equally spaced in arc length, `steps` segments
std::vector<Vec3> resample(const std::vector<Vec3>& pts, int steps) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) s[i] = s[i - 1] + (pts[i] - pts[i - 1]).norm();
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  std::size_t j = 0;
  for (int k = 0; k <= steps; ++k) {
    const double target = s.back() * k / steps;
    while (j + 2 < pts.size() && s[j + 1] < target) ++j;
    const double span = s[j + 1] - s[j];
    const double t = span > 0.0 ? std::clamp((target - s[j]) / span, 0.0, 1.0) : 0.0;
    out.push_back(pts[j] + t * (pts[j + 1] - pts[j]));
  }
  out.back() = pts.back();
  return out;
}

Trajectory with_angles(const std::vector<Vec3>& pts) {
  Trajectory traj;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 d = i + 1 < pts.size() ? Vec3(pts[i + 1] - pts[i]) : Vec3(pts[i] - pts[i - 1]);
    traj.push_back(pts[i], std::atan2(d.y(), d.x()), std::atan2(d.z(), d.head<2>().norm()));
  }
  return traj;
}

}  // namespace

long first_limit_violation(const Trajectory& traj, const KinematicLimits& limits, double turn_tolerance) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double z = traj.points[i].z();
    if (z < limits.h_min || z > limits.h_max) return static_cast<long>(i);
    if (traj.pitch[i] < limits.theta_min || traj.pitch[i] > limits.theta_max) return static_cast<long>(i);
    if (i + 1 < traj.size() &&
        std::abs(wrap_angle(traj.heading[i + 1] - traj.heading[i])) > limits.max_turn_step() + turn_tolerance) {
      return static_cast<long>(i);
    }
  }
  return -1;
}

Trajectory gen_initial_path(const Vec3& start, const Vec3& goal, const KinematicLimits& limits, std::uint64_t seed) {
  limits.validate();
  for (const Vec3* p : {&start, &goal}) {
    if (p->z() < limits.h_min || p->z() > limits.h_max) throw Error("gen_initial_path: endpoint outside altitude band");
  }
  const Vec3 chord = goal - start;
  const double dist = chord.norm();
  if (!(dist > 0.0)) throw Error("gen_initial_path: start and goal coincide");
  const double step = limits.v0 * limits.dt;
  const auto min_steps = static_cast<int>(std::ceil(dist / step - 1e-9));
  const auto max_steps = static_cast<int>(std::floor(10.0 * dist / step));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Bulge shape;
  shape.lateral[0] = 1.0;
  shape.lateral[1] = 0.3 * unit(rng);
  shape.lateral[2] = 0.15 * unit(rng);
  shape.vertical = 0.1 * unit(rng);
  const int extra_max = static_cast<int>(std::floor(0.05 * min_steps * (0.5 + 0.5 * unit(rng))));

  Vec3 side = chord.cross(Vec3::UnitZ());
  if (side.norm() < 1e-9) side = Vec3::UnitX();
  side.normalize();
  if (unit(rng) < 0.0) side = -side;

  const int samples = std::max(200, 8 * min_steps);
  for (int extra = extra_max; extra >= 0; --extra) {
    const int steps = min_steps + extra;
    if (steps > max_steps) continue;
    const double target = steps * step;
    // bisect the bulge amplitude so that the arc length equals steps * step
    double lo = 0.0;
    double hi = dist;
    if (curve_length(dense_curve(start, goal, side, shape, lo, samples)) >= target) {
      hi = lo;
    } else {
      while (curve_length(dense_curve(start, goal, side, shape, hi, samples)) < target) hi *= 2.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (curve_length(dense_curve(start, goal, side, shape, mid, samples)) < target ? lo : hi) = mid;
      }
    }
    const Trajectory traj = with_angles(resample(dense_curve(start, goal, side, shape, hi, samples), steps));
    bool ok = first_limit_violation(traj, limits) < 0;
    for (std::size_t i = 0; ok && i + 1 < traj.size(); ++i) {
      ok = std::abs((traj.points[i + 1] - traj.points[i]).norm() - step) <= 0.01 * step;
    }
    if (ok) return traj;
  }
  throw Error("path generation failed");
}

std::vector<Vec3> velocity_field_from_path(const Trajectory& traj, double dt) {
  if (traj.size() < 2) throw Error("velocity_field_from_path: need at least two points");
  if (!(dt > 0.0)) throw Error("velocity_field_from_path: dt must be positive");
  std::vector<Vec3> out;
  out.reserve(traj.size() - 1);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) out.push_back((traj.points[i + 1] - traj.points[i]) / dt);
  return out;
}

}  // namespace shadowplan
