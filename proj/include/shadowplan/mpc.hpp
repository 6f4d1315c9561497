#pragma once

#include "shadowplan/guidance.hpp"
#include "shadowplan/ifds.hpp"

#include <span>
#include <vector>

namespace shadowplan {

using ObstacleForecast = std::vector<std::vector<SuperEllipsoidObstacle>>;

struct MpcConfig {
  int horizon{20};
  double lambda_tracking{0.4};
  double lambda_obstacle{0.4};
  double lambda_smoothness{0.2};
  double mu_heading{1.0};
  double mu_pitch{1.0};
  double gamma_safe{1.2};
  std::vector<IfdsParams> candidates;

  void validate() const;
};

/// Cartesian product rho x sigma_n x eta, in that nesting order (eta fastest).
std::vector<IfdsParams> candidate_grid(std::span<const double> rhos, std::span<const double> sigmas,
                                       std::span<const double> etas, double tau);
/// rho, sigma_n in {1, 1.5, 2.5}, eta in {0, 0.3, 0.6}.
std::vector<IfdsParams> default_candidate_grid(double tau = 30.0);

struct CostBreakdown {
  double tracking{0.0};
  double obstacle{0.0};
  double smoothness{0.0};
  double total{0.0};
  bool feasible{false};
};

/// Everything a rollout needs besides the vehicle state and candidate.
struct PlanningContext {
  const ChannelGeometry* channel{nullptr};
  /// element i: obstacles expected i steps ahead
  const ObstacleForecast* forecast{nullptr};
  KinematicLimits limits;
  GuidanceSettings settings;
};

struct Rollout {
  Trajectory traj;
  std::vector<Vec3> nominal;
  std::vector<Vec3> commanded;
  /// guidance output of the first step
  GuidanceOutput first;
  bool ok{false};
};

/// Integrates the guidance law for `horizon` steps against the forecast.
Rollout rollout(const UavState& state, const IfdsParams& candidate, int horizon, const PlanningContext& ctx);

/// Sum of 1 - cos(angle) between paired vectors. Throws "undefined angle" on a zero vector.
double tracking_cost(std::span<const Vec3> nominal, std::span<const Vec3> modulated);

/// phi(Gamma): 0 above gamma_safe, 1/(Gamma - 1) in the band, +inf at or below 1.
double barrier_penalty(double gamma, double gamma_safe);

/// Penalty summed over every obstacle and every point, point i against forecast[i].
double obstacle_penalty(const Trajectory& traj, const ObstacleForecast& forecast, double gamma_safe);

double smoothness_cost(const Trajectory& traj, double mu_heading, double mu_pitch);

/// Turn rate, path angle, altitude band and Gamma > 1 at every point.
bool feasibility(const Trajectory& traj, const KinematicLimits& limits, const ObstacleForecast& forecast);

CostBreakdown evaluate(const Rollout& r, const MpcConfig& cfg, const PlanningContext& ctx);

struct StepResult {
  UavState next;
  /// index into the candidate grid, -1 for the emergency manoeuvre
  int chosen{-1};
  CostBreakdown cost;
  GuidanceOutput guidance;
  bool emergency{false};
  std::vector<CostBreakdown> all_costs;
};

/// Evaluates every candidate, commits the first step of the cheapest
/// feasible one (ties to the lowest index). When none is feasible, flies a
/// maximum-rate climbing turn away from the nearest current obstacle.
StepResult optimize_step(const UavState& state, const MpcConfig& cfg, const PlanningContext& ctx);

/// Climbing turn away from the nearest obstacle at the maximum rate.
UavState emergency_step(const UavState& state, std::span<const SuperEllipsoidObstacle> obstacles,
                        const KinematicLimits& limits);

}  // namespace shadowplan
