#pragma once

#include "shadowplan/config.hpp"
#include "shadowplan/simulation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace shadowplan {

struct MetricMeans {
  std::size_t count{0};
  double path_length{0.0};
  double smoothness{0.0};
  double min_gamma{0.0};
  double coverage_area{0.0};
};

struct PlannerSummary {
  PlannerKind planner{PlannerKind::ifds_mpc};
  std::size_t runs{0};
  std::size_t successes{0};
  double success_rate{0.0};  ///< percent
  MetricMeans all;
  MetricMeans succeeded;
  MetricMeans failed;
  /// mean coverage relative to the PID mean of the same campaign (NaN without PID)
  double coverage_gain{0.0};
  std::size_t emergencies{0};
  double mean_step_ms{0.0};
  std::vector<double> step_ms;
  std::vector<RunMetrics> per_run;
};

struct CampaignSummary {
  std::vector<PlannerSummary> planners;
  std::vector<std::string> warnings;

  const PlannerSummary& get(PlannerKind kind) const;
};

/// Where a campaign writes; nullopt runs without touching the filesystem.
using OutputDir = std::optional<std::filesystem::path>;

/// Fresh subdirectory `<base>/<name>-<UTC timestamp>[-n]`.
std::filesystem::path make_campaign_dir(const std::filesystem::path& base, const std::string& name);

/// Records the config, seed and SHA-256 of every file under `dir`.
void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& cfg, const std::string& command);

std::string sha256_hex(const std::string& data);

/// Paired-seed Monte Carlo: seeds base .. base + runs - 1 for every planner.
/// Duplicate planners are dropped with a warning.
CampaignSummary monte_carlo(const ExperimentConfig& cfg, const std::vector<PlannerKind>& planners, int runs,
                            const OutputDir& out = std::nullopt);

struct SweepRow {
  int horizon{0};
  double mean_cost{0.0};
  double mean_step_ms{0.0};
  double p95_step_ms{0.0};
  double success_rate{0.0};
};

std::vector<SweepRow> sweep_horizon(const ExperimentConfig& cfg, const std::vector<int>& horizons, int runs,
                                    const OutputDir& out = std::nullopt);

struct AblationResult {
  RunResult with_dfaa;
  RunResult without_dfaa;
  double eta{0.0};
};

/// Paired runs of the fixed-parameter planner with and without the descent gain.
/// Requires a preset with a narrow-corridor segment.
AblationResult ablate_dfaa(const ExperimentConfig& cfg, const OutputDir& out = std::nullopt);

struct RobustnessRow {
  double sigma{0.0};
  std::size_t runs{0};
  double success_rate{0.0};
};

std::vector<RobustnessRow> robustness(const ExperimentConfig& cfg, const std::vector<double>& sigmas, int runs,
                                      const OutputDir& out = std::nullopt);

}  // namespace shadowplan
