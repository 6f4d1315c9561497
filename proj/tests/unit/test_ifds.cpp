#include <doctest.h>

#include "shadowplan/baselines.hpp"
#include "shadowplan/guidance.hpp"
#include "shadowplan/ifds.hpp"
#include "shadowplan/initial_path.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

using namespace shadowplan;

namespace {

RiverScenario straight_river(double half_width) {
  RiverScenario r;
  r.control_points = {{0, 0, 0}, {200, 0, 0}, {400, 0, 0}, {600, 0, 0}};
  r.half_width = half_width;
  r.bounds.min = Vec3(-60, -half_width - 60, 0);
  r.bounds.max = Vec3(660, half_width + 60, 200);
  return r;
}

SuperEllipsoidObstacle sphere(const Vec3& center, double radius) {
  SuperEllipsoidObstacle o;
  o.center = center;
  o.a = o.b = o.c = radius;
  return o;
}

SuperEllipsoidObstacle disc(const Vec3& center, double radius, double thickness) {
  SuperEllipsoidObstacle o = sphere(center, radius);
  o.c = thickness;
  return o;
}

class BandShadow final : public ShadowMap {
 public:
  BandShadow(double lo, double hi) : lo_(lo), hi_(hi) {}
  bool shadowed(double, double y) const override { return y >= lo_ && y <= hi_; }

 private:
  double lo_;
  double hi_;
};

// Longest clear run of 1 m cells across [-hw, hw] given a shadow predicate on y.
template <class F>
double oracle_width(double hw, F shadowed) {
  double best = 0.0;
  double run = 0.0;
  for (double y = -hw + 0.5; y < hw; y += 1.0) {
    run = shadowed(y) ? 0.0 : run + 1.0;
    best = std::max(best, run);
  }
  return best;
}

// Independent check of the turn, climb and altitude limits between two states.
bool within_limits(const UavState& a, const UavState& b, const KinematicLimits& lim) {
  double dpsi = std::fmod(b.heading - a.heading, 2.0 * M_PI);
  if (dpsi > M_PI) dpsi -= 2.0 * M_PI;
  if (dpsi < -M_PI) dpsi += 2.0 * M_PI;
  return std::abs(dpsi) <= lim.omega_max * lim.dt + 1e-9 && b.pitch >= lim.theta_min - 1e-12 &&
         b.pitch <= lim.theta_max + 1e-12 && b.position.z() >= lim.h_min - 1e-9 && b.position.z() <= lim.h_max + 1e-9;
}

}  // namespace

TEST_CASE("kinematic and planner parameter validation") {
  KinematicLimits lim;
  CHECK_NOTHROW(lim.validate());
  lim.omega_max = 0.0;
  CHECK_THROWS_AS(lim.validate(), Error);
  lim = {};
  lim.theta_min = lim.theta_max;
  CHECK_THROWS_AS(lim.validate(), Error);
  lim = {};
  lim.h_min = 130.0;
  CHECK_THROWS_AS(lim.validate(), Error);
  IfdsParams p;
  CHECK_NOTHROW(p.validate());
  p.rho = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.eta = -0.1;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.tau = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("initial path on a straight feasible segment") {
  const KinematicLimits lim;
  const Vec3 start(0, 0, 80);
  const Vec3 goal(10 * lim.v0 * lim.dt, 0, 80);
  const Trajectory path = gen_initial_path(start, goal, lim, 1);
  REQUIRE(path.size() == 11);
  CHECK((path.points.front() - start).norm() < 1e-9);
  CHECK((path.points.back() - goal).norm() < 1e-9);
  for (const auto& p : path.points) CHECK(std::abs(p.y()) < 1.0);
  CHECK(first_limit_violation(path, lim) == -1);
  CHECK_THROWS_AS(gen_initial_path(start, Vec3(50, 0, lim.h_max + 5), lim, 1), Error);
  CHECK_THROWS_AS(gen_initial_path(start, start, lim, 1), Error);
}

TEST_CASE("initial paths satisfy every limit") {
  const KinematicLimits lim;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ux(150.0, 400.0);
  std::uniform_real_distribution<double> uy(-80.0, 80.0);
  std::uniform_real_distribution<double> uz(60.0, 100.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Vec3 start(0, 0, uz(rng));
    const Vec3 goal(ux(rng), uy(rng), uz(rng));
    const Trajectory path = gen_initial_path(start, goal, lim, seed);
    REQUIRE(path.size() >= 2);
    CHECK((path.points.back() - goal).norm() < 1e-6);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const Vec3 d = path.points[i + 1] - path.points[i];
      CHECK(std::abs(d.norm() - lim.v0 * lim.dt) <= 0.01 * lim.v0 * lim.dt);
      UavState a{path.points[i], path.heading[i], path.pitch[i]};
      UavState b{path.points[i + 1], path.heading[i + 1], path.pitch[i + 1]};
      CHECK(within_limits(a, b, lim));
    }
    CHECK(gen_initial_path(start, goal, lim, seed).points == path.points);
  }
}

TEST_CASE("velocity field from a path") {
  Trajectory t;
  t.push_back(Vec3(0, 0, 50), 0, 0);
  t.push_back(Vec3(1, 0, 50), 0, 0);
  t.push_back(Vec3(1.5, 0.5, 50.2), 0, 0);
  const auto u = velocity_field_from_path(t, 0.1);
  REQUIRE(u.size() == 2);
  CHECK((u[0] - Vec3(10, 0, 0)).norm() < 1e-12);
  Vec3 p = t.points.front();
  for (std::size_t i = 0; i < u.size(); ++i) {
    p += u[i] * 0.1;
    CHECK((p - t.points[i + 1]).norm() < 1e-12);
  }
  Trajectory still;
  still.push_back(Vec3(3, 3, 60), 0, 0);
  still.push_back(Vec3(3, 3, 60), 0, 0);
  CHECK(velocity_field_from_path(still, 0.1)[0].isZero());
  Trajectory lone;
  lone.push_back(Vec3::Zero(), 0, 0);
  CHECK_THROWS_AS(velocity_field_from_path(lone, 0.1), Error);
}

TEST_CASE("modulation matrix by hand on a unit sphere") {
  const auto s = sphere(Vec3::Zero(), 1.0);
  IfdsParams params;
  params.rho = 1.5;
  params.sigma_n = 1.5;
  const Vec3 u(-1.0, 0.5, 0.0);
  const Mat3 m = modulation_matrix(Vec3(2, 0, 0), s, params, u);
  // Gamma = 4, n = +x, t = -y (keeps (n.u)(t.u) >= 0)
  const double w = std::pow(4.0, -1.0 / 1.5);
  const double g = std::pow(4.0, -1.0 / 1.5) / 1.5;
  const Vec3 mu = m * u;
  CHECK(mu.x() == doctest::Approx(-1.0 + w));
  CHECK(mu.y() == doctest::Approx(0.5 + g));
  CHECK(std::abs(mu.z()) < 1e-15);

  // on the surface the normal weight is one and the normal flow vanishes
  const Mat3 ms = modulation_matrix(Vec3(1, 0, 0), s, params, u);
  CHECK(std::abs((ms * u).x()) < 1e-12);
  CHECK_THROWS_WITH_AS(modulation_matrix(Vec3::Zero(), s, params, u), "degenerate normal", Error);
}

TEST_CASE("modulation decays to the identity far away") {
  const auto s = sphere(Vec3::Zero(), 1.0);
  const IfdsParams params;
  const Vec3 u(1, 0.3, 0.1);
  // Gamma = r^2 for the unit sphere
  const Mat3 m6 = modulation_matrix(Vec3(1e3, 0, 0), s, params, u);
  CHECK((m6 - Mat3::Identity()).operatorNorm() < 1e-3);
  const Mat3 m4 = modulation_matrix(Vec3(0, -1e2, 0), s, params, u);
  CHECK((m4 - Mat3::Identity()).operatorNorm() < 0.01);
}

TEST_CASE("tangent is a unit vector orthogonal to the normal") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Vec3 n = Vec3(g(rng), g(rng), g(rng)).normalized();
    const Vec3 flow(g(rng), g(rng), g(rng));
    const Vec3 motion(g(rng), g(rng), g(rng));
    const Vec3 t = tangent_direction(n, flow, motion);
    CHECK(t.norm() == doctest::Approx(1.0));
    CHECK(std::abs(t.dot(n)) < 1e-12);
    CHECK(n.dot(flow) * t.dot(motion) >= 0.0);
  }
  CHECK(std::abs(tangent_direction(Vec3::UnitZ(), Vec3(1, 0, -1), Vec3(1, 0, -1)).dot(Vec3::UnitZ())) < 1e-12);
}

TEST_CASE("modulated velocity keeps the speed") {
  const KinematicLimits lim;
  const IfdsParams params;
  const std::vector<SuperEllipsoidObstacle> none;
  CHECK((modulate_velocity(Vec3(0, 0, 100), Vec3(3, 4, 0), none, params, lim) - Vec3(6, 8, 0)).norm() < 1e-12);

  // head-on approach to a static sphere along +x
  const std::vector<SuperEllipsoidObstacle> one{sphere(Vec3::Zero(), 10.0)};
  const Vec3 u(lim.v0, 0, 0);
  const Vec3 out = modulate_velocity(Vec3(-20, 0, 0), u, one, params, lim);
  CHECK(out.norm() == doctest::Approx(lim.v0).epsilon(1e-9));
  CHECK(std::abs(out.y()) > 0.1);
  // scalar oracle: n = -x, t = +y, Gamma = 4
  const double w = std::pow(4.0, -1.0 / params.sigma_n);
  const double g = std::pow(4.0, -1.0 / params.rho) / params.rho;
  const Vec3 raw(lim.v0 * (1.0 - w), -lim.v0 * g, 0.0);
  CHECK((out - raw * (lim.v0 / raw.norm())).norm() < 1e-9);

  // far field: untouched direction
  const Vec3 far = modulate_velocity(Vec3(-1500, 0, 0), Vec3(2, 1, 0), one, params, lim);
  CHECK((far - Vec3(2, 1, 0).normalized() * lim.v0).norm() < 1e-12);

  CHECK_THROWS_AS(modulate_velocity(Vec3(-20, 0, 0), Vec3::Zero(), one, params, lim), Error);
}

TEST_CASE("moving obstacle modulation adds the shadow velocity back") {
  const KinematicLimits lim;
  const IfdsParams params;
  auto o = sphere(Vec3::Zero(), 10.0);
  o.velocity = Vec3(0, 2, 0);
  const std::vector<SuperEllipsoidObstacle> one{o};
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 dir = Vec3(g(rng), g(rng), 0.2 * g(rng)).normalized();
    const Vec3 p = dir * (10.0 * std::sqrt(1.5 + 3.0 * std::abs(g(rng))));
    const Vec3 u = lim.v0 * Vec3(g(rng), g(rng), 0.1 * g(rng)).normalized();
    const Vec3 out = modulate_velocity(p, u, one, params, lim);
    CHECK(out.norm() == doctest::Approx(lim.v0).epsilon(1e-9));
    // out - v must be a positive multiple of M (u - v)
    const Vec3 w = modulation_matrix(p, o, params, u - o.velocity) * (u - o.velocity);
    const Vec3 rel = out - o.velocity;
    CHECK(rel.cross(w).norm() <= 1e-9 * rel.norm() * w.norm());
    CHECK(rel.dot(w) > 0.0);
  }
}

TEST_CASE("effective width across a straight channel") {
  const ChannelGeometry ch(straight_river(30.0));
  const BandShadow none(1e9, 2e9);
  CHECK(effective_width(Vec3(300, 0, 100), ch, none) == doctest::Approx(60.0));
  const BandShadow middle(-10.0, 10.0);
  const double w = effective_width(Vec3(300, 5, 100), ch, middle);
  CHECK(w == doctest::Approx(oracle_width(30.0, [](double y) { return y >= -10.0 && y <= 10.0; })));
  CHECK(w == doctest::Approx(20.0));
  const BandShadow offset(-30.0, -12.0);
  CHECK(effective_width(Vec3(300, 0, 100), ch, offset) ==
        doctest::Approx(oracle_width(30.0, [](double y) { return y >= -30.0 && y <= -12.0; })));
  const BandShadow all(-100.0, 100.0);
  CHECK(effective_width(Vec3(300, 0, 100), ch, all) == 0.0);
  CHECK(effective_width(Vec3(300, 45, 100), ch, none) == 0.0);
}

TEST_CASE("descent mode perturbation") {
  KinematicLimits lim;
  IfdsParams params;
  params.eta = 0.3;
  params.tau = 30.0;
  const Mat3 m = Mat3::Identity() * 0.7;
  const Vec3 high(0, 0, 90);
  CHECK(apply_dfaa(m, 50.0, params, high, lim) == m);
  const Mat3 d = apply_dfaa(m, 10.0, params, high, lim);
  CHECK(d(2, 2) == doctest::Approx(0.7 - 0.3));
  Mat3 rest = d;
  rest(2, 2) = m(2, 2);
  CHECK(rest == m);
  CHECK(apply_dfaa(m, 10.0, params, Vec3(0, 0, lim.h_min), lim) == m);
}

TEST_CASE("guidance in an empty straight channel follows the centerline") {
  const ChannelGeometry ch(straight_river(50.0));
  const KinematicLimits lim;
  const IfdsParams params;
  GuidanceSettings settings;
  settings.cruise_altitude = 100.0;
  const UavState uav{Vec3(100, 0, 100), 0.0, 0.0, lim.v0, 0.0};
  const GuidanceOutput out = total_guidance(uav, GuidanceContext{&ch, {}, false}, params, lim, settings);
  CHECK((out.velocity - Vec3(lim.v0, 0, 0)).norm() < 1e-9);
  CHECK_FALSE(out.dfaa_active);
}

TEST_CASE("guidance output always has the cruise speed") {
  const ChannelGeometry ch(straight_river(50.0));
  const KinematicLimits lim;
  const IfdsParams params;
  const GuidanceSettings settings;
  std::vector<SuperEllipsoidObstacle> obs;
  for (int k = 0; k < 6; ++k) obs.push_back(disc(Vec3(80.0 + 80.0 * k, (k % 2 ? 20.0 : -20.0), 100), 15.0, 10.0));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ux(0.0, 600.0);
  std::uniform_real_distribution<double> uy(-50.0, 50.0);
  std::uniform_real_distribution<double> uz(45.0, 115.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> pit(-0.5, 0.5);
  int checked = 0;
  while (checked < 1000) {
    const Vec3 p(ux(rng), uy(rng), uz(rng));
    if (!is_feasible(p, obs)) continue;
    const UavState uav{p, ang(rng), pit(rng), lim.v0, 0.0};
    const GuidanceOutput out = total_guidance(uav, GuidanceContext{&ch, obs, false}, params, lim, settings);
    CHECK(std::abs(out.velocity.norm() - lim.v0) <= 1e-9 * lim.v0);
    ++checked;
  }
}

TEST_CASE("far from every obstacle guidance is the reference direction") {
  const ChannelGeometry ch(straight_river(50.0));
  const KinematicLimits lim;
  IfdsParams params;
  params.eta = 0.0;
  GuidanceSettings settings;
  settings.cruise_altitude = 100.0;
  // Gamma >= 1e4 everywhere in the test region
  const std::vector<SuperEllipsoidObstacle> obs{disc(Vec3(300, 150, 100), 1.0, 1.0)};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(0.0, 600.0);
  std::uniform_real_distribution<double> uy(-30.0, 30.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 p(ux(rng), uy(rng), 100.0);
    REQUIRE(min_gamma(p, obs).gamma >= kFarFieldGamma);
    const Vec3 ref = reference_field(ch, p);
    const UavState uav{p, std::atan2(ref.y(), ref.x()), 0.0, lim.v0, 0.0};
    const GuidanceOutput out = total_guidance(uav, GuidanceContext{&ch, obs, false}, params, lim, settings);
    CHECK(std::acos(std::clamp(out.velocity.normalized().dot(ref), -1.0, 1.0)) < 1e-3);
  }
}

TEST_CASE("closed loop around static obstacles respects the kinematic limits") {
  const ChannelGeometry ch(straight_river(60.0));
  KinematicLimits lim;
  IfdsParams params;
  params.eta = 0.0;
  GuidanceSettings settings;
  settings.cruise_altitude = 100.0;
  for (std::uint64_t scene = 0; scene < 50; ++scene) {
    std::mt19937_64 rng(scene + 500);
    std::uniform_real_distribution<double> ur(10.0, 20.0);
    std::uniform_real_distribution<double> uy(-40.0, 40.0);
    std::vector<SuperEllipsoidObstacle> obs;
    double x = 90.0;
    while (x < 540.0) {
      const double r = ur(rng);
      auto o = disc(Vec3(x + r, uy(rng), 100.0), r, 10.0);
      o.inflate_a = o.inflate_b = o.inflate_c = 1.1;
      obs.push_back(o);
      x += 2.0 * r * 1.1 + 60.0;
    }
    UavState uav{Vec3(0, 0, 100), 0.0, 0.0, lim.v0, 0.0};
    bool ok = true;
    for (int k = 0; k < 1200 && uav.position.x() < 580.0; ++k) {
      GuidanceOutput g;
      const UavState next = ifds_only_step(uav, GuidanceContext{&ch, obs, false}, params, lim, settings, &g);
      ok = ok && within_limits(uav, next, lim);
      uav = next;
    }
    CHECK_MESSAGE(ok, "scene " << scene);
    CHECK(uav.position.x() >= 580.0);
  }
}

TEST_CASE("descent mode in a narrow corridor") {
  const ChannelGeometry ch(straight_river(40.0));
  KinematicLimits lim;
  IfdsParams params;
  params.eta = 0.3;
  params.tau = 30.0;
  GuidanceSettings settings;
  settings.cruise_altitude = 100.0;
  // two rows of discs leave a 20 m lane along the centerline
  std::vector<SuperEllipsoidObstacle> obs;
  for (double x = 100.0; x <= 400.0; x += 15.0) {
    obs.push_back(disc(Vec3(x, 25.0, 100.0), 15.0, 10.0));
    obs.push_back(disc(Vec3(x, -25.0, 100.0), 15.0, 10.0));
  }
  UavState uav{Vec3(150, 0, 100), 0.0, 0.0, lim.v0, 0.0};
  GuidanceOutput first;
  const UavState second = ifds_only_step(uav, GuidanceContext{&ch, obs, false}, params, lim, settings, &first);
  CHECK(first.dfaa_active);
  CHECK(first.w_eff < params.tau);
  CHECK(first.velocity.z() <= 0.0);

  double prev_z = second.position.z();
  uav = second;
  for (int k = 0; k < 150 && uav.position.x() < 380.0; ++k) {
    GuidanceOutput g;
    const UavState next = ifds_only_step(uav, GuidanceContext{&ch, obs, false}, params, lim, settings, &g);
    if (g.dfaa_active && uav.position.z() > lim.h_min) {
      CHECK(g.velocity.z() <= 0.0);
      CHECK(next.position.z() <= prev_z + 1e-12);
    }
    prev_z = next.position.z();
    uav = next;
  }
  CHECK(uav.position.z() < 90.0);
}
