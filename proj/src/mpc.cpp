#include "shadowplan/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shadowplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void MpcConfig::validate() const {
  if (horizon < 1) throw Error("mpc: horizon must be >= 1");
  for (double w : {lambda_tracking, lambda_obstacle, lambda_smoothness}) {
    if (!(w >= 0.0 && w <= 1.0)) throw Error("mpc: weights must lie in [0, 1]");
  }
  if (std::abs(lambda_tracking + lambda_obstacle + lambda_smoothness - 1.0) > 1e-9) {
    throw Error("mpc: weights must sum to 1");
  }
  if (!(mu_heading >= 0.0) || !(mu_pitch >= 0.0)) throw Error("mpc: smoothness sub-weights must be non-negative");
  if (!(gamma_safe > 1.0)) throw Error("mpc: gamma_safe must exceed 1");
  if (candidates.empty()) throw Error("mpc: candidate grid is empty");
  for (const auto& c : candidates) c.validate();
}

std::vector<IfdsParams> candidate_grid(std::span<const double> rhos, std::span<const double> sigmas,
                                       std::span<const double> etas, double tau) {
  std::vector<IfdsParams> out;
  for (double rho : rhos) {
    for (double sigma : sigmas) {
      for (double eta : etas) out.push_back({rho, sigma, eta, tau});
    }
  }
  return out;
}

std::vector<IfdsParams> default_candidate_grid(double tau) {
  const double values[] = {1.0, 1.5, 2.5};
  const double etas[] = {0.0, 0.3, 0.6};
  return candidate_grid(values, values, etas, tau);
}

Rollout rollout(const UavState& state, const IfdsParams& candidate, int horizon, const PlanningContext& ctx) {
  if (ctx.forecast == nullptr || ctx.forecast->size() < static_cast<std::size_t>(horizon) + 1) {
    throw Error("rollout: forecast shorter than the horizon");
  }
  Rollout r;
  r.traj.push_back(state.position, state.heading, state.pitch);
  UavState s = state;
  try {
    for (int i = 0; i < horizon; ++i) {
      GuidanceContext g{ctx.channel, (*ctx.forecast)[static_cast<std::size_t>(i)], false};
      const GuidanceOutput out = total_guidance(s, g, candidate, ctx.limits, ctx.settings);
      if (i == 0) r.first = out;
      r.nominal.push_back(out.nominal);
      r.commanded.push_back(out.velocity);
      s = advance(s, out, ctx.limits);
      r.traj.push_back(s.position, s.heading, s.pitch);
    }
    r.ok = true;
  } catch (const Error&) {
    r.ok = false;
  }
  return r;
}

double tracking_cost(std::span<const Vec3> nominal, std::span<const Vec3> modulated) {
  if (nominal.size() != modulated.size() || nominal.empty()) {
    throw Error("tracking_cost: need equal-length non-empty sequences");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < nominal.size(); ++i) {
    const double n1 = nominal[i].norm();
    const double n2 = modulated[i].norm();
    if (!(n1 > 0.0) || !(n2 > 0.0)) throw Error("undefined angle");
    sum += 1.0 - std::clamp(nominal[i].dot(modulated[i]) / (n1 * n2), -1.0, 1.0);
  }
  return sum;
}

double barrier_penalty(double gamma, double gamma_safe) {
  if (gamma > gamma_safe) return 0.0;
  if (gamma <= 1.0) return kInf;
  return 1.0 / (gamma - 1.0);
}

double obstacle_penalty(const Trajectory& traj, const ObstacleForecast& forecast, double gamma_safe) {
  if (forecast.size() < traj.size()) throw Error("obstacle_penalty: forecast shorter than trajectory");
  double sum = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (const auto& obs : forecast[i]) sum += barrier_penalty(gamma_value(traj.points[i], obs), gamma_safe);
  }
  return sum;
}

double smoothness_cost(const Trajectory& traj, double mu_heading, double mu_pitch) {
  double sum = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    sum += mu_heading * std::abs(wrap_angle(traj.heading[i] - traj.heading[i - 1])) +
           mu_pitch * std::abs(wrap_angle(traj.pitch[i] - traj.pitch[i - 1]));
  }
  return sum;
}

bool feasibility(const Trajectory& traj, const KinematicLimits& limits, const ObstacleForecast& forecast) {
  if (forecast.size() < traj.size()) return false;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i > 0 && std::abs(wrap_angle(traj.heading[i] - traj.heading[i - 1])) > limits.max_turn_step() + 1e-9) {
      return false;
    }
    if (traj.pitch[i] < limits.theta_min || traj.pitch[i] > limits.theta_max) return false;
    const double z = traj.points[i].z();
    if (z < limits.h_min || z > limits.h_max) return false;
    if (!is_feasible(traj.points[i], forecast[i])) return false;
  }
  return true;
}

CostBreakdown evaluate(const Rollout& r, const MpcConfig& cfg, const PlanningContext& ctx) {
  CostBreakdown c;
  if (!r.ok) {
    c.tracking = c.obstacle = c.smoothness = c.total = kInf;
    return c;
  }
  c.tracking = tracking_cost(r.nominal, r.commanded);
  c.obstacle = obstacle_penalty(r.traj, *ctx.forecast, cfg.gamma_safe);
  c.smoothness = smoothness_cost(r.traj, cfg.mu_heading, cfg.mu_pitch);
  c.feasible = feasibility(r.traj, ctx.limits, *ctx.forecast);
  c.total = c.feasible ? cfg.lambda_tracking * c.tracking + cfg.lambda_obstacle * c.obstacle +
                             cfg.lambda_smoothness * c.smoothness
                       : kInf;
  return c;
}

UavState emergency_step(const UavState& state, std::span<const SuperEllipsoidObstacle> obstacles,
                        const KinematicLimits& limits) {
  double heading_cmd = state.heading;
  if (!obstacles.empty()) {
    const NearestObstacle near = min_gamma(state.position, obstacles);
    const Vec3 g = gamma_gradient(state.position, obstacles[near.index]);
    if (g.head<2>().norm() > 1e-12) heading_cmd = std::atan2(g.y(), g.x());
  }
  // turn at the full rate; the direction follows the shorter way round
  const double diff = wrap_angle(heading_cmd - state.heading);
  const double turn = diff >= 0.0 ? limits.max_turn_step() : -limits.max_turn_step();
  const double target = std::abs(diff) < limits.max_turn_step() ? heading_cmd : state.heading + turn;
  const LimitedAttitude att = limit_attitude(state, target, limits.theta_max, limits.v0, limits);
  GuidanceOutput out;
  out.heading = att.heading;
  out.pitch = att.pitch;
  out.velocity = limits.v0 * direction_from_angles(att.heading, att.pitch);
  return advance(state, out, limits);
}

StepResult optimize_step(const UavState& state, const MpcConfig& cfg, const PlanningContext& ctx) {
  if (cfg.candidates.empty()) throw Error("mpc: candidate grid is empty");
  StepResult res;
  res.all_costs.reserve(cfg.candidates.size());
  Rollout best;
  double best_j = kInf;
  for (std::size_t k = 0; k < cfg.candidates.size(); ++k) {
    Rollout r = rollout(state, cfg.candidates[k], cfg.horizon, ctx);
    const CostBreakdown c = evaluate(r, cfg, ctx);
    res.all_costs.push_back(c);
    if (c.feasible && c.total < best_j) {
      best_j = c.total;
      res.chosen = static_cast<int>(k);
      res.cost = c;
      best = std::move(r);
    }
  }
  if (res.chosen >= 0) {
    res.guidance = best.first;
    res.next = UavState{best.traj.points[1], best.traj.heading[1], best.traj.pitch[1], ctx.limits.v0,
                        state.time + ctx.limits.dt};
    return res;
  }
  res.emergency = true;
  res.cost = CostBreakdown{kInf, kInf, kInf, kInf, false};
  res.next = emergency_step(state, (*ctx.forecast)[0], ctx.limits);
  res.guidance.velocity = (res.next.position - state.position) / ctx.limits.dt;
  res.guidance.heading = res.next.heading;
  res.guidance.pitch = res.next.pitch;
  res.guidance.w_eff = std::numeric_limits<double>::quiet_NaN();
  return res;
}

}  // namespace shadowplan
