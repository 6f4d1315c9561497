#include "shadowplan/simulation.hpp"

#include "shadowplan/baselines.hpp"
#include "shadowplan/ekf.hpp"
#include "shadowplan/mpc.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace shadowplan {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RiverScenario river_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  const ShadowPreset preset = preset_by_name(cfg.preset);
  const double hw = cfg.half_width > 0.0 ? cfg.half_width : preset.channel_half_width;
  RiverScenario river = default_river(hw, seed);
  river.bounds.max.z() = std::max(river.bounds.max.z(), cfg.limits.h_max + 10.0);
  return river;
}

double mission_duration(const ExperimentConfig& cfg, const Centerline& centerline) {
  return (static_cast<double>(step_budget(cfg, centerline)) + cfg.mpc.horizon + 2) * cfg.limits.dt + 1.0;
}

TrackObservation observe(const BlobState& blob, double altitude, double sigma, std::mt19937_64& rng) {
  TrackObservation o;
  o.center = Vec3(blob.x, blob.y, altitude);
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (int k = 0; k < 3; ++k) o.center(k) += noise(rng);
  }
  o.radius = blob.circumscribed_radius();
  return o;
}

double executed_penalty(const Vec3& p, std::span<const SuperEllipsoidObstacle> truth, double gamma_safe, double cap) {
  double sum = 0.0;
  for (const auto& o : truth) sum += std::min(cap, barrier_penalty(gamma_value(p, o), gamma_safe));
  return sum;
}

}  // namespace

std::shared_ptr<const ChannelGeometry> make_channel(const ExperimentConfig& cfg) {
  return std::make_shared<const ChannelGeometry>(river_for(cfg, cfg.seed));
}

std::size_t step_budget(const ExperimentConfig& cfg, const Centerline& centerline) {
  const double straight = (centerline.point_at(centerline.length()) - centerline.point_at(0.0)).head<2>().norm();
  return static_cast<std::size_t>(std::ceil(cfg.budget_factor * straight / (cfg.limits.v0 * cfg.limits.dt)));
}

Scenario make_scenario(const ExperimentConfig& cfg, std::uint64_t seed, std::shared_ptr<const ChannelGeometry> channel) {
  if (!channel) channel = make_channel(cfg);
  RiverScenario river = river_for(cfg, seed);
  river.mission_duration = mission_duration(cfg, channel->centerline());
  ShadowPreset preset = preset_by_name(cfg.preset);
  if (cfg.blob_count >= 0) preset.blob_count = cfg.blob_count;
  if (cfg.blob_radius_min >= 0.0) preset.radius_min = cfg.blob_radius_min;
  if (cfg.blob_radius_max >= 0.0) preset.radius_max = cfg.blob_radius_max;
  if (cfg.blob_speed_max >= 0.0) preset.speed_max = cfg.blob_speed_max;
  if (cfg.blob_min_gap >= 0.0) preset.min_gap = cfg.blob_min_gap;
  if (cfg.blob_speed_min >= 0.0) preset.speed_min = cfg.blob_speed_min;
  if (cfg.blob_lateral_spread >= 0.0) preset.lateral_spread = cfg.blob_lateral_spread;
  if (!std::isnan(cfg.wind_heading_deg)) preset.wind_heading = cfg.wind_heading_deg * std::numbers::pi / 180.0;
  if (!std::isnan(cfg.wind_spread_deg)) preset.heading_spread = cfg.wind_spread_deg * std::numbers::pi / 180.0;
  if (!(preset.radius_min > 0.0 && preset.radius_min <= preset.radius_max)) {
    throw Error("blob radius range must satisfy 0 < min <= max");
  }
  if (!(preset.speed_min >= 0.0 && preset.speed_min <= preset.speed_max)) {
    throw Error("blob speed range must satisfy 0 <= min <= max");
  }
  return Scenario(river, std::move(preset), std::move(channel));
}

std::vector<SuperEllipsoidObstacle> truth_obstacles(const Scenario& scenario, double t, const ExperimentConfig& cfg) {
  std::vector<SuperEllipsoidObstacle> out;
  for (const BlobState& b : scenario.blob_states(t)) {
    SuperEllipsoidObstacle o;
    o.center = Vec3(b.x, b.y, cfg.obstacle_altitude);
    o.a = b.a;
    o.b = b.b;
    o.c = std::min({cfg.obstacle_thickness, b.a, b.b});
    o.p = o.q = b.exponent;
    o.r = 1;
    o.yaw = b.yaw;
    out.push_back(o);
  }
  return out;
}

RunResult run_single(const ExperimentConfig& cfg, PlannerKind planner, std::uint64_t seed,
                     std::shared_ptr<const ChannelGeometry> channel) {
  cfg.validate();
  if (!channel) channel = make_channel(cfg);
  const Scenario scenario = make_scenario(cfg, seed, channel);
  const Centerline& cl = channel->centerline();
  const KinematicLimits& lim = cfg.limits;
  const std::size_t budget = step_budget(cfg, cl);

  // the observation noise stream is independent of the scenario stream
  std::mt19937_64 noise_rng(seed * 0x9E3779B97F4A7C15ULL + 0x0B5E'4FA7ULL);
  TrackNoise noise = cfg.track_noise;
  noise.center_sigma = std::hypot(noise.center_sigma, cfg.noise_sigma);

  std::vector<ObstacleTrackState> tracks;
  for (const BlobState& b : scenario.blob_states(0.0)) {
    tracks.push_back(init_track(observe(b, cfg.obstacle_altitude, cfg.noise_sigma, noise_rng), noise, lim.dt));
  }

  const Vec3 start = cl.point_at(0.0) + Vec3(0.0, 0.0, cfg.guidance.cruise_altitude);
  const Vec3 t0 = cl.tangent_at(0.0);
  UavState state{start, std::atan2(t0.y(), t0.x()), 0.0, lim.v0, 0.0};

  LyapunovMonitor monitor;
  monitor.target = cl.point_at(cl.length());
  monitor.radius = 0.0;
  monitor.altitude = cfg.guidance.cruise_altitude - monitor.target.z();

  CoverageAccumulator coverage(*channel, cfg.camera);
  PidMemory pid_memory;
  const int horizon = planner == PlannerKind::ifds_mpc ? cfg.mpc.horizon : 1;

  RunResult result;
  for (std::size_t k = 0;; ++k) {
    const double t = state.time;
    if (k > 0) {
      const auto blobs = scenario.blob_states(t);
      for (std::size_t i = 0; i < tracks.size(); ++i) {
        tracks[i] = ekf_update(ekf_predict(tracks[i], lim.dt),
                               observe(blobs[i], cfg.obstacle_altitude, cfg.noise_sigma, noise_rng));
      }
    }
    const auto truth = truth_obstacles(scenario, t, cfg);
    const BlobShadowMap truth_shadows = scenario.shadows_at(t);

    StepRecord row;
    row.t = t;
    row.position = state.position;
    row.heading = state.heading;
    row.pitch = state.pitch;
    row.min_gamma = truth.empty() ? std::numeric_limits<double>::infinity() : min_gamma(state.position, truth).gamma;
    const auto cov = coverage.step(state.position, state.heading, state.speed * lim.dt, truth_shadows);
    row.coverage_new = cov.new_area;
    row.coverage_ratio = cov.ratio;
    row.gsd = state.position.z() > 0.0 ? gsd(state.position.z() - cl.point_at(0.0).z(), cfg.camera) : 0.0;
    row.lyapunov = lyapunov_value(state.position, monitor);

    const auto proj = cl.project(state.position);
    const bool reached = proj.station >= cl.length() - 1.0 && std::abs(proj.cross_track) <= channel->half_width();
    const bool collided = !(row.min_gamma > 1.0);
    const bool escaped = !channel->bounds().contains(state.position);
    if (reached || escaped || k >= budget || (collided && cfg.stop_on_collision)) {
      row.w_eff = kNaN;
      result.steps.push_back(row);
      break;
    }

    const ObstacleForecast forecast = predict_obstacles(tracks, horizon, lim.dt, cfg.planner_shape);
    const auto& current = forecast[0];
    row.w_eff = effective_width(state.position, *channel, ObstacleShadowMap(current));

    const auto clock_start = std::chrono::steady_clock::now();
    UavState next;
    Vec3 nominal = lim.v0 * reference_field(*channel, state.position, cfg.guidance.reference);
    switch (planner) {
      case PlannerKind::pid: {
        const auto over = simple_avoidance(state, current, cfg.avoidance, lim);
        next = pid_step(state, pid_memory, *channel, cfg.pid, lim, cfg.guidance.cruise_altitude, over);
        break;
      }
      case PlannerKind::ifds: {
        GuidanceOutput g;
        next = ifds_only_step(state, GuidanceContext{channel.get(), current, false}, cfg.ifds, lim, cfg.guidance, &g);
        row.dfaa_active = g.dfaa_active;
        nominal = g.nominal;
        break;
      }
      case PlannerKind::ifds_mpc: {
        const PlanningContext ctx{channel.get(), &forecast, lim, cfg.guidance};
        const StepResult r = optimize_step(state, cfg.mpc, ctx);
        next = r.next;
        row.chosen = r.chosen;
        row.has_costs = true;
        row.tracking = r.cost.tracking;
        row.obstacle = r.cost.obstacle;
        row.smoothness = r.cost.smoothness;
        row.total = r.cost.total;
        row.dfaa_active = r.guidance.dfaa_active;
        row.emergency = r.emergency;
        if (!r.emergency) nominal = r.guidance.nominal;
        break;
      }
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - clock_start).count();
    result.step_ms.push_back(ms);
    row.step_ms = ms;
    result.steps.push_back(row);

    // executed-path cost of this decision, scored against the truth at the next instant
    const Vec3 velocity = (next.position - state.position) / lim.dt;
    const auto truth_next = truth_obstacles(scenario, next.time, cfg);
    result.executed_cost +=
        cfg.mpc.lambda_tracking * (1.0 - std::clamp(nominal.normalized().dot(velocity.normalized()), -1.0, 1.0)) +
        cfg.mpc.lambda_obstacle * executed_penalty(next.position, truth_next, cfg.mpc.gamma_safe,
                                                   cfg.executed_penalty_cap) +
        cfg.mpc.lambda_smoothness * (cfg.mpc.mu_heading * std::abs(wrap_angle(next.heading - state.heading)) +
                                     cfg.mpc.mu_pitch * std::abs(wrap_angle(next.pitch - state.pitch)));
    state = next;
  }

  result.metrics = summarize_run(result.steps, cl, lim.dt, budget);
  return result;
}

}  // namespace shadowplan
