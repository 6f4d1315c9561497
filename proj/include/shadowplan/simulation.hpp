#pragma once

#include "shadowplan/config.hpp"
#include "shadowplan/metrics.hpp"
#include "shadowplan/scenario.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace shadowplan {

struct RunResult {
  RunMetrics metrics;
  std::vector<StepRecord> steps;
  /// planner wall time per decision (ms), measured whether or not it is logged
  std::vector<double> step_ms;
  /// executed-path cost: weighted tracking, capped obstacle penalty and smoothness
  double executed_cost{0.0};
};

/// River and raster for the configured preset; shareable across runs.
std::shared_ptr<const ChannelGeometry> make_channel(const ExperimentConfig& cfg);

/// Scenario realization for one seed.
Scenario make_scenario(const ExperimentConfig& cfg, std::uint64_t seed, std::shared_ptr<const ChannelGeometry> channel);

/// Ground-truth obstacle volumes lifted from the blob cross-sections at time t.
std::vector<SuperEllipsoidObstacle> truth_obstacles(const Scenario& scenario, double t, const ExperimentConfig& cfg);

/// Number of decisions allowed before a run counts as timed out.
std::size_t step_budget(const ExperimentConfig& cfg, const Centerline& centerline);

/// Closed-loop flight from the start to the end of the channel.
RunResult run_single(const ExperimentConfig& cfg, PlannerKind planner, std::uint64_t seed,
                     std::shared_ptr<const ChannelGeometry> channel = nullptr);

}  // namespace shadowplan
