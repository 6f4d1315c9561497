// Independent re-implementations used to check the library.
#pragma once

#include "shadowplan/geometry.hpp"
#include "shadowplan/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace oracle {

using shadowplan::Vec3;

// Scalar super-ellipsoid field, written out term by term.
inline double gamma(double x, double y, double z, const shadowplan::SuperEllipsoidObstacle& o) {
  const double dx = x - o.center.x();
  const double dy = y - o.center.y();
  const double dz = z - o.center.z();
  const double c = std::cos(o.yaw);
  const double s = std::sin(o.yaw);
  const double lx = c * dx + s * dy;
  const double ly = -s * dx + c * dy;
  auto term = [](double v, double axis, int e) {
    double r = v / axis;
    r = std::max(-1e6, std::min(1e6, r));
    return std::pow(r * r, e);
  };
  return term(lx, o.inflate_a * o.a, o.p) + term(ly, o.inflate_b * o.b, o.q) + term(dz, o.inflate_c * o.c, o.r);
}

inline shadowplan::SuperEllipsoidObstacle random_obstacle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-200.0, 200.0);
  std::uniform_real_distribution<double> horiz(10.0, 40.0);
  std::uniform_real_distribution<double> infl(1.0, 1.5);
  std::uniform_real_distribution<double> ang(-3.14, 3.14);
  std::uniform_int_distribution<int> ex(1, 4);
  shadowplan::SuperEllipsoidObstacle o;
  o.center = Vec3(pos(rng), pos(rng), pos(rng) * 0.2 + 100.0);
  o.a = horiz(rng);
  o.b = horiz(rng);
  o.c = std::min(o.a, o.b) * std::uniform_real_distribution<double>(0.2, 1.0)(rng);
  o.p = ex(rng);
  o.q = ex(rng);
  o.r = ex(rng);
  o.inflate_a = infl(rng);
  o.inflate_b = infl(rng);
  o.inflate_c = infl(rng);
  o.yaw = ang(rng);
  return o;
}

// Point on a random ray whose field value lands in [lo, hi], found by bisection.
inline Vec3 point_in_band(const shadowplan::SuperEllipsoidObstacle& o, std::mt19937_64& rng, double lo, double hi) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 dir(g(rng), g(rng), g(rng));
  dir.normalize();
  const double target = std::uniform_real_distribution<double>(lo, hi)(rng);
  double a = 0.0;
  double b = 1.0;
  auto f = [&](double s) {
    const Vec3 p = o.center + s * dir;
    return gamma(p.x(), p.y(), p.z(), o);
  };
  while (f(b) < target) b *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (f(m) < target ? a : b) = m;
  }
  return o.center + 0.5 * (a + b) * dir;
}

// Central-difference gradient of the scalar field.
inline Vec3 gamma_gradient(const Vec3& p, const shadowplan::SuperEllipsoidObstacle& o, double h = 1e-5) {
  Vec3 fd;
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e(k) = h;
    const Vec3 a = p + e;
    const Vec3 b = p - e;
    fd(k) = (gamma(a.x(), a.y(), a.z(), o) - gamma(b.x(), b.y(), b.z(), o)) / (2.0 * h);
  }
  return fd;
}

inline double wrapped(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

// Cost of one rollout recomputed from its raw samples.
inline double rollout_cost(const shadowplan::Rollout& r, const shadowplan::MpcConfig& cfg,
                           const shadowplan::ObstacleForecast& forecast, const shadowplan::KinematicLimits& lim) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!r.ok) return kInf;
  double tracking = 0.0;
  for (std::size_t i = 0; i < r.nominal.size(); ++i) {
    tracking += 1.0 - r.nominal[i].dot(r.commanded[i]) / (r.nominal[i].norm() * r.commanded[i].norm());
  }
  double obstacle = 0.0;
  double smooth = 0.0;
  for (std::size_t i = 0; i < r.traj.size(); ++i) {
    const Vec3& p = r.traj.points[i];
    if (p.z() < lim.h_min || p.z() > lim.h_max) return kInf;
    if (r.traj.pitch[i] < lim.theta_min || r.traj.pitch[i] > lim.theta_max) return kInf;
    for (const auto& o : forecast[i]) {
      const double g = gamma(p.x(), p.y(), p.z(), o);
      if (g <= 1.0) return kInf;
      if (g <= cfg.gamma_safe) obstacle += 1.0 / (g - 1.0);
    }
    if (i > 0) {
      const double dpsi = std::abs(wrapped(r.traj.heading[i] - r.traj.heading[i - 1]));
      if (dpsi > lim.omega_max * lim.dt + 1e-9) return kInf;
      smooth += cfg.mu_heading * dpsi + cfg.mu_pitch * std::abs(wrapped(r.traj.pitch[i] - r.traj.pitch[i - 1]));
    }
  }
  return cfg.lambda_tracking * tracking + cfg.lambda_obstacle * obstacle + cfg.lambda_smoothness * smooth;
}

}  // namespace oracle
