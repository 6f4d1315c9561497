// End-to-end acceptance run: the benchmark campaigns plus the numerical
// invariant suite, one PASS/FAIL line per criterion.
#include "shadowplan/shadowplan.hpp"
#include "support/oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace shadowplan;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass{true};
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- campaigns

struct Campaigns {
  CampaignSummary mc;
  double mc_seconds{0.0};
  AblationResult ablation;
  std::vector<RobustnessRow> robustness;
  std::vector<SweepRow> sweep;
};

ExperimentConfig dense_config() {
  ExperimentConfig c;
  c.preset = "dense";
  c.seed = 1;
  c.timing = false;
  return c;
}

Campaigns run_campaigns(const fs::path& dir) {
  Campaigns out;
  const ExperimentConfig dense = dense_config();

  const auto t0 = std::chrono::steady_clock::now();
  out.mc = monte_carlo(dense, {PlannerKind::ifds_mpc, PlannerKind::ifds, PlannerKind::pid}, 50, dir / "montecarlo");
  out.mc_seconds = seconds_since(t0);
  write_manifest(dir / "montecarlo", dense, "montecarlo");

  ExperimentConfig narrow = dense;
  narrow.preset = "narrow";
  out.ablation = ablate_dfaa(narrow, dir / "ablation");
  write_manifest(dir / "ablation", narrow, "ablate-dfaa");

  out.robustness = robustness(dense, {0.0, 1.0, 3.0}, 50, dir / "robustness");
  write_manifest(dir / "robustness", dense, "robustness");

  out.sweep = sweep_horizon(dense, {5, 10, 20, 30}, 20, dir / "sweep");
  write_manifest(dir / "sweep", dense, "sweep");
  return out;
}

Verdict table_ordering(const Campaigns& c) {
  Verdict v;
  const auto& mpc = c.mc.get(PlannerKind::ifds_mpc);
  const auto& ifds = c.mc.get(PlannerKind::ifds);
  const auto& pid = c.mc.get(PlannerKind::pid);
  v.require(mpc.success_rate > ifds.success_rate && ifds.success_rate > pid.success_rate,
            "success " + fmt("%.0f", mpc.success_rate) + " > " + fmt("%.0f", ifds.success_rate) + " > " +
                fmt("%.0f", pid.success_rate));
  v.require(mpc.success_rate >= 95.0, "ifds_mpc success >= 95");
  v.require(mpc.succeeded.smoothness < ifds.succeeded.smoothness && ifds.succeeded.smoothness < pid.succeeded.smoothness,
            "smoothness " + fmt("%.2f", mpc.succeeded.smoothness) + " < " + fmt("%.2f", ifds.succeeded.smoothness) +
                " < " + fmt("%.2f", pid.succeeded.smoothness));
  double worst = kInf;
  for (const auto& r : mpc.per_run) worst = std::min(worst, r.min_gamma);
  v.require(mpc.all.min_gamma >= dense_config().mpc.gamma_safe,
            "mean min gamma " + fmt("%.3f", mpc.all.min_gamma) + " (worst run " + fmt("%.3f", worst) + ")");
  v.require(c.mc_seconds <= 600.0, "campaign " + fmt("%.0f", c.mc_seconds) + " s");
  return v;
}

Verdict path_overhead(const Campaigns& c) {
  Verdict v;
  const double mpc = c.mc.get(PlannerKind::ifds_mpc).succeeded.path_length;
  const double pid = c.mc.get(PlannerKind::pid).succeeded.path_length;
  v.require(mpc <= 1.10 * pid, "path " + fmt("%.1f", mpc) + " vs pid " + fmt("%.1f", pid) + " (ratio " +
                                   fmt("%.3f", mpc / pid) + ")");
  return v;
}

Verdict coverage_gain(const Campaigns& c) {
  Verdict v;
  const double mpc = c.mc.get(PlannerKind::ifds_mpc).all.coverage_area;
  const double pid = c.mc.get(PlannerKind::pid).all.coverage_area;
  v.require(mpc >= 1.15 * pid, "coverage " + fmt("%.0f", mpc) + " vs pid " + fmt("%.0f", pid) + " m^2 (gain " +
                                   fmt("%.3f", mpc / pid) + ")");
  return v;
}

Verdict dfaa_ablation(const Campaigns& c) {
  Verdict v;
  const ExperimentConfig cfg = dense_config();
  const double cruise = cfg.guidance.cruise_altitude;
  const auto& on = c.ablation.with_dfaa.steps;
  const auto& off = c.ablation.without_dfaa.steps;

  double lowest_narrow = kInf;
  const StepRecord* lowest = nullptr;
  for (const auto& s : on) {
    if (s.w_eff < cfg.ifds.tau) lowest_narrow = std::min(lowest_narrow, s.position.z());
    if (lowest == nullptr || s.position.z() < lowest->position.z()) lowest = &s;
  }
  v.require(lowest_narrow < cruise, "descends while narrow, to " + fmt("%.2f", lowest_narrow) + " m");
  v.require(lowest != nullptr && lowest->position.z() >= cfg.limits.h_min, "stays above h_min");
  if (lowest != nullptr) {
    v.require(std::abs(lowest->gsd - 0.082) <= 0.01 * 0.082,
              "gsd " + fmt("%.4f", lowest->gsd) + " at " + fmt("%.2f", lowest->position.z()) + " m");
  }
  bool flat = !off.empty();
  for (const auto& s : off) flat = flat && std::abs(s.position.z() - cruise) <= 1e-9;
  v.require(flat, "eta = 0 holds " + fmt("%.0f", cruise) + " m");
  return v;
}

Verdict noise_robustness(const Campaigns& c) {
  Verdict v;
  std::string rates;
  for (const auto& r : c.robustness) rates += (rates.empty() ? "" : "/") + fmt("%.0f", r.success_rate);
  v.require(c.robustness.size() == 3 && c.robustness[2].success_rate >= 85.0, "success at sigma 0/1/3 = " + rates);
  bool monotone = true;
  for (std::size_t i = 1; i < c.robustness.size(); ++i) {
    monotone = monotone && c.robustness[i].success_rate <= c.robustness[i - 1].success_rate + 4.0;
  }
  v.require(monotone, "non-increasing within 4 points");
  return v;
}

const SweepRow* sweep_row(const Campaigns& c, int n) {
  for (const auto& r : c.sweep) {
    if (r.horizon == n) return &r;
  }
  return nullptr;
}

Verdict realtime_budget(const Campaigns& c) {
  Verdict v;
  const SweepRow* r = sweep_row(c, 20);
  const double budget_ms = 1000.0 * dense_config().limits.dt;
  v.require(r != nullptr && dense_config().mpc.candidates.size() == 27, "N = 20, 27 candidates");
  if (r != nullptr) {
    v.require(r->mean_step_ms < budget_ms, "mean " + fmt("%.2f", r->mean_step_ms) + " ms");
    v.require(r->p95_step_ms < budget_ms, "p95 " + fmt("%.2f", r->p95_step_ms) + " ms");
  }
  return v;
}

Verdict horizon_trend(const Campaigns& c) {
  Verdict v;
  const SweepRow* n5 = sweep_row(c, 5);
  const SweepRow* n20 = sweep_row(c, 20);
  v.require(n5 != nullptr && n20 != nullptr && n20->mean_cost <= n5->mean_cost,
            "cost N=20 " + fmt("%.2f", n20 ? n20->mean_cost : NAN) + " <= N=5 " + fmt("%.2f", n5 ? n5->mean_cost : NAN));
  bool rising = true;
  std::string times;
  for (std::size_t i = 0; i < c.sweep.size(); ++i) {
    if (i > 0) rising = rising && c.sweep[i].mean_step_ms > c.sweep[i - 1].mean_step_ms;
    times += (times.empty() ? "" : " < ") + fmt("%.2f", c.sweep[i].mean_step_ms);
  }
  v.require(rising, "step ms " + times);
  return v;
}

// ------------------------------------------------------- numerical invariants

RiverScenario straight_river(double half_width) {
  RiverScenario r;
  r.control_points = {{0, 0, 0}, {200, 0, 0}, {400, 0, 0}, {600, 0, 0}};
  r.half_width = half_width;
  r.bounds.min = Vec3(-60, -half_width - 60, 0);
  r.bounds.max = Vec3(660, half_width + 60, 200);
  return r;
}

SuperEllipsoidObstacle disc(const Vec3& center, double radius, double thickness = 10.0) {
  SuperEllipsoidObstacle o;
  o.center = center;
  o.a = o.b = radius;
  o.c = thickness;
  return o;
}

bool gradient_check(std::string& note) {
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto o = oracle::random_obstacle(rng);
    const Vec3 p = oracle::point_in_band(o, rng, 1.0, 5.0);
    const Vec3 an = gamma_gradient(p, o);
    worst = std::max(worst, (an - oracle::gamma_gradient(p, o)).norm() / an.norm());
  }
  note = "gradient rel err " + fmt("%.1e", worst);
  return worst < 1e-6;
}

bool normalization_check(std::string& note) {
  const ChannelGeometry ch(straight_river(50.0));
  const KinematicLimits lim;
  const IfdsParams params;
  const GuidanceSettings settings;
  std::vector<SuperEllipsoidObstacle> obs;
  for (int k = 0; k < 6; ++k) obs.push_back(disc(Vec3(80.0 + 80.0 * k, (k % 2 ? 20.0 : -20.0), 100), 15.0));
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ux(0.0, 600.0);
  std::uniform_real_distribution<double> uy(-50.0, 50.0);
  std::uniform_real_distribution<double> uz(45.0, 115.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> pit(-0.5, 0.5);
  double worst = 0.0;
  for (int checked = 0; checked < 1000;) {
    const Vec3 p(ux(rng), uy(rng), uz(rng));
    if (!is_feasible(p, obs)) continue;
    const UavState uav{p, ang(rng), pit(rng), lim.v0, 0.0};
    const GuidanceOutput out = total_guidance(uav, GuidanceContext{&ch, obs, false}, params, lim, settings);
    worst = std::max(worst, std::abs(out.velocity.norm() - lim.v0));
    ++checked;
  }
  note = "|u| - V0 up to " + fmt("%.1e", worst);
  return worst <= 1e-9;
}

bool barrier_check(std::string& note) {
  const ChannelGeometry ch(straight_river(60.0));
  const KinematicLimits lim;
  GuidanceSettings settings;
  settings.cruise_altitude = 100.0;
  const MpcConfig cfg = dense_config().mpc;
  double lowest = kInf;
  int arrived = 0;
  for (std::uint64_t scene = 0; scene < 50; ++scene) {
    std::mt19937_64 rng(scene + 900);
    std::uniform_real_distribution<double> ur(10.0, 20.0);
    std::uniform_real_distribution<double> uy(-35.0, 35.0);
    std::vector<SuperEllipsoidObstacle> obs;
    for (double x = 80.0; x < 280.0;) {
      const double r = ur(rng);
      auto o = disc(Vec3(x + r, uy(rng), 100.0), r);
      o.inflate_a = o.inflate_b = o.inflate_c = 1.1;
      obs.push_back(o);
      x += 2.2 * r + 25.0;
    }
    const ObstacleForecast fc(static_cast<std::size_t>(cfg.horizon) + 1, obs);
    const PlanningContext ctx{&ch, &fc, lim, settings};
    UavState s{Vec3(0, 0, 100), 0.0, 0.0, lim.v0, 0.0};
    if (!(min_gamma(s.position, obs).gamma > 1.0)) return false;
    for (int k = 0; k < 600 && s.position.x() < 320.0; ++k) {
      s = optimize_step(s, cfg, ctx).next;
      lowest = std::min(lowest, min_gamma(s.position, obs).gamma);
    }
    arrived += s.position.x() >= 320.0;
  }
  note = "min gamma over 50 scenes " + fmt("%.3f", lowest) + ", " + std::to_string(arrived) + "/50 through";
  return lowest > 1.0;
}

bool lyapunov_check(std::string& note) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> off(-120.0, 120.0);
  std::uniform_real_distribution<double> alt(40.0, 160.0);
  double worst = 1.0;
  for (int run = 0; run < 20; ++run) {
    LyapunovMonitor m;
    m.target = Vec3(off(rng), off(rng), 0.0);
    m.radius = 50.0;
    m.altitude = 100.0;
    Vec3 p = m.target + Vec3(off(rng), off(rng), alt(rng));
    for (int k = 0; k < 1500; ++k) {
      record(m, p);
      p += loiter_velocity(p, m, 10.0, 0.1) * 0.1;
    }
    worst = std::min(worst, check_descent(m.series, 1e-9).fraction);
  }
  note = "loiter descent fraction >= " + fmt("%.4f", worst);
  return worst >= 0.99;
}

bool ekf_check(std::string& note) {
  const Vec3 truth(40.0, -10.0, 100.0);
  double sq = 0.0;
  const int seeds = 50;
  for (int seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 500);
    std::normal_distribution<double> n3(0.0, 3.0);
    TrackNoise noise;
    noise.center_sigma = 3.0;
    noise.accel_sigma = 0.0;
    noise.radius_accel_sigma = 0.0;
    auto obs = [&] { return TrackObservation{truth + Vec3(n3(rng), n3(rng), n3(rng)), 20.0 + n3(rng)}; };
    auto t = init_track(obs(), noise, 0.1);
    t.covariance.bottomRightCorner<4, 4>() = 1e-4 * Mat4::Identity();
    for (int k = 1; k < 100; ++k) t = ekf_update(ekf_predict(t, 0.1), obs());
    sq += (t.mean.head<3>() - truth).squaredNorm();
  }
  const double rmse = std::sqrt(sq / seeds);
  note = "EKF RMSE " + fmt("%.3f", rmse) + " m";
  return rmse < 1.0;
}

bool argmin_check(std::string& note) {
  const ChannelGeometry ch(straight_river(60.0));
  GuidanceSettings settings;
  settings.cruise_altitude = 100.0;
  const KinematicLimits lim;
  const MpcConfig cfg = dense_config().mpc;
  std::mt19937_64 rng(1618);
  std::uniform_real_distribution<double> ux(60.0, 120.0);
  std::uniform_real_distribution<double> uy(-40.0, 40.0);
  std::uniform_real_distribution<double> ur(8.0, 20.0);
  std::uniform_real_distribution<double> uv(-3.0, 3.0);
  std::uniform_real_distribution<double> uh(-0.5, 0.5);
  int agree = 0;
  for (int scene = 0; scene < 20; ++scene) {
    std::vector<SuperEllipsoidObstacle> obs;
    for (int k = 0; k < 4; ++k) {
      auto o = disc(Vec3(ux(rng) + 40.0 * k, uy(rng), 100.0), ur(rng));
      o.velocity = Vec3(uv(rng), uv(rng), 0.0);
      o.inflate_a = o.inflate_b = o.inflate_c = 1.1;
      obs.push_back(o);
    }
    ObstacleForecast fc;
    for (int i = 0; i <= cfg.horizon; ++i) {
      auto step = obs;
      for (auto& o : step) o.center += o.velocity * lim.dt * i;
      fc.push_back(step);
    }
    const PlanningContext ctx{&ch, &fc, lim, settings};
    const UavState s{Vec3(20, uy(rng) * 0.5, 100.0), uh(rng), 0.0, lim.v0, 0.0};
    const StepResult res = optimize_step(s, cfg, ctx);
    int best = -1;
    double best_j = kInf;
    for (std::size_t k = 0; k < cfg.candidates.size(); ++k) {
      const double j = oracle::rollout_cost(rollout(s, cfg.candidates[k], cfg.horizon, ctx), cfg, fc, lim);
      if (j < best_j) {
        best_j = j;
        best = static_cast<int>(k);
      }
    }
    const bool same_cost = best < 0 ? std::isinf(res.cost.total)
                                    : std::abs(res.cost.total - best_j) <= 1e-12 * std::max(1.0, best_j);
    agree += res.chosen == best && same_cost;
  }
  note = "argmin agrees on " + std::to_string(agree) + "/20 scenes";
  return agree == 20;
}

Verdict numerical_suite() {
  Verdict v;
  std::string note;
  for (auto check : {gradient_check, normalization_check, barrier_check, lyapunov_check, ekf_check, argmin_check}) {
    const bool ok = check(note);
    v.require(ok, note);
  }
  return v;
}

// ------------------------------------------------------------- determinism

Verdict determinism(const fs::path& first, const fs::path& second) {
  Verdict v;
  std::size_t files = 0;
  std::size_t differ = 0;
  std::string first_diff;
  for (const auto& e : fs::recursive_directory_iterator(first)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), first);
    ++files;
    const fs::path other = second / rel;
    if (!fs::exists(other) || read_text(e.path()) != read_text(other)) {
      ++differ;
      if (first_diff.empty()) first_diff = rel.generic_string();
    }
  }
  std::size_t second_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(second)) second_files += e.is_regular_file();
  v.require(files > 0 && differ == 0 && files == second_files,
            std::to_string(files) + " files compared, " + std::to_string(differ) + " differ" +
                (first_diff.empty() ? "" : " (first: " + first_diff + ")"));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run"};
  std::string out = "acceptance_out";
  app.add_option("--out", out, "base output directory");
  CLI11_PARSE(app, argc, argv);

  const fs::path dir = make_campaign_dir(out, "acceptance");
  const auto t0 = std::chrono::steady_clock::now();
  const Campaigns first = run_campaigns(dir / "first");
  const Verdict numeric = numerical_suite();
  // every campaign again with the same config and seeds
  run_campaigns(dir / "second");

  const std::vector<std::pair<std::string, Verdict>> results{
      {"success and smoothness ordering", table_ordering(first)},
      {"path-length overhead", path_overhead(first)},
      {"coverage gain", coverage_gain(first)},
      {"descent-mode ablation", dfaa_ablation(first)},
      {"observation-noise robustness", noise_robustness(first)},
      {"real-time budget", realtime_budget(first)},
      {"horizon trend", horizon_trend(first)},
      {"numerical invariants", numeric},
      {"determinism", determinism(dir / "first", dir / "second")},
  };

  std::ostringstream report;
  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, v] = results[i];
    report << (v.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << name << ": " << v.detail << '\n';
    failed += v.pass ? 0 : 1;
  }
  report << "total " << fmt("%.0f", seconds_since(t0)) << " s, outputs in " << dir.string() << '\n';
  std::cout << report.str();
  write_text(dir / "acceptance.txt", report.str());
  return failed == 0 ? 0 : 1;
}
