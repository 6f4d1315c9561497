// Command-line front end for the shadow-aware planning benchmarks.
#include "shadowplan/shadowplan.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace sp = shadowplan;
namespace fs = std::filesystem;

namespace {

constexpr int kConfigError = 2;
constexpr int kSimulationError = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::vector<std::string> planners;
  std::string out;
};

sp::ExperimentConfig resolve(const Options& o) {
  sp::ExperimentConfig cfg = o.config.empty() ? sp::ExperimentConfig{} : sp::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) cfg.runs = *o.runs;
  if (o.planners.size() == 1) cfg.planner = sp::planner_from_name(o.planners.front());
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, Options& o, bool multi_planner) {
  cmd->add_option("--config", o.config, "config file (key = value)");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--runs", o.runs, "runs per planner / setting");
  auto* p = cmd->add_option("--planner", o.planners, "pid | ifds | ifds_mpc")->delimiter(',');
  if (!multi_planner) p->expected(1);
  cmd->add_option("--out", o.out, "output base directory");
}

void print_summary(const sp::CampaignSummary& s) {
  std::cout << "planner    runs  success%  path_len  smooth   min_gamma  coverage_m2  gain\n";
  for (const auto& p : s.planners) {
    std::printf("%-9s %5zu  %8.1f  %8.1f  %7.2f  %9.3f  %11.0f  %5.3f\n", sp::planner_name(p.planner).c_str(), p.runs,
                p.success_rate, p.all.path_length, p.all.smoothness, p.all.min_gamma, p.all.coverage_area,
                p.coverage_gain);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadow-aware UAV path planning simulator"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "single closed-loop run");
  add_common(simulate, o, false);
  auto* mc = app.add_subcommand("montecarlo", "paired-seed Monte Carlo over planners");
  add_common(mc, o, true);
  auto* sweep = app.add_subcommand("sweep", "horizon sweep of the MPC planner");
  add_common(sweep, o, false);
  auto* ablate = app.add_subcommand("ablate-dfaa", "paired runs with and without the descent gain");
  add_common(ablate, o, false);
  auto* robust = app.add_subcommand("robustness", "success rate against observation noise");
  add_common(robust, o, false);
  std::string plot_dir;
  auto* plots = app.add_subcommand("plots", "SVG and gnuplot files from step logs");
  plots->add_option("dir", plot_dir, "campaign directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  sp::ExperimentConfig cfg;
  try {
    if (!plots->parsed()) cfg = resolve(o);
  } catch (const sp::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (plots->parsed()) {
      for (const auto& f : sp::emit_plots(plot_dir)) std::cout << f.string() << '\n';
      return 0;
    }
    const fs::path base = cfg.output_dir;
    if (simulate->parsed()) {
      const fs::path dir = sp::make_campaign_dir(base, "simulate");
      const sp::RunResult r = sp::run_single(cfg, cfg.planner, cfg.seed);
      sp::write_text(dir / (sp::planner_name(cfg.planner) + "_" + std::to_string(cfg.seed) + "_steps.csv"),
                     sp::steps_csv(r.steps, cfg.timing));
      sp::write_text(dir / "metrics.csv", sp::metrics_csv_header() + sp::metrics_csv_row(sp::planner_name(cfg.planner),
                                                                                      cfg.seed, r.metrics, cfg.timing));
      sp::write_manifest(dir, cfg, "simulate");
      std::printf("%s seed %llu: success=%d steps=%zu path=%.1f m min_gamma=%.3f coverage=%.0f m2\n",
                  sp::planner_name(cfg.planner).c_str(), static_cast<unsigned long long>(cfg.seed), r.metrics.success,
                  r.metrics.steps, r.metrics.path_length, r.metrics.min_gamma, r.metrics.coverage_area);
      std::cout << dir.string() << '\n';
      return r.metrics.success ? 0 : kSimulationError;
    }
    if (mc->parsed()) {
      std::vector<sp::PlannerKind> planners;
      for (const auto& n : o.planners) planners.push_back(sp::planner_from_name(n));
      if (planners.empty()) planners = {sp::PlannerKind::ifds_mpc, sp::PlannerKind::ifds, sp::PlannerKind::pid};
      const fs::path dir = sp::make_campaign_dir(base, "montecarlo");
      print_summary(sp::monte_carlo(cfg, planners, cfg.runs, dir));
      sp::write_manifest(dir, cfg, "montecarlo");
      std::cout << dir.string() << '\n';
      return 0;
    }
    if (sweep->parsed()) {
      const fs::path dir = sp::make_campaign_dir(base, "sweep");
      for (const auto& r : sp::sweep_horizon(cfg, cfg.sweep_horizons, cfg.runs, dir)) {
        std::printf("N=%-3d cost=%.3f step_ms=%.2f p95=%.2f success=%.1f%%\n", r.horizon, r.mean_cost, r.mean_step_ms,
                    r.p95_step_ms, r.success_rate);
      }
      sp::write_manifest(dir, cfg, "sweep");
      std::cout << dir.string() << '\n';
      return 0;
    }
    if (ablate->parsed()) {
      const fs::path dir = sp::make_campaign_dir(base, "ablate-dfaa");
      const auto r = sp::ablate_dfaa(cfg, dir);
      std::printf("eta=%.2f: min altitude %.1f m (fixed: %.1f m)\n", r.eta, r.with_dfaa.metrics.min_altitude,
                  r.without_dfaa.metrics.min_altitude);
      sp::write_manifest(dir, cfg, "ablate-dfaa");
      std::cout << dir.string() << '\n';
      return 0;
    }
    if (robust->parsed()) {
      const fs::path dir = sp::make_campaign_dir(base, "robustness");
      for (const auto& r : sp::robustness(cfg, cfg.robustness_sigmas, cfg.runs, dir)) {
        std::printf("sigma=%.2f success=%.1f%% (%zu runs)\n", r.sigma, r.success_rate, r.runs);
      }
      sp::write_manifest(dir, cfg, "robustness");
      std::cout << dir.string() << '\n';
      return 0;
    }
  } catch (const sp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSimulationError;
  }
  return 0;
}
