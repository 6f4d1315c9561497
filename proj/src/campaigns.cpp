#include "shadowplan/campaigns.hpp"

#include "shadowplan/csv.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace shadowplan {

namespace fs = std::filesystem;

namespace {

void accumulate(MetricMeans& m, const RunMetrics& r) {
  ++m.count;
  m.path_length += r.path_length;
  m.smoothness += r.smoothness;
  m.min_gamma += r.min_gamma;
  m.coverage_area += r.coverage_area;
}

void finish(MetricMeans& m) {
  if (m.count == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.path_length = m.smoothness = m.min_gamma = m.coverage_area = nan;
    return;
  }
  const auto n = static_cast<double>(m.count);
  m.path_length /= n;
  m.smoothness /= n;
  m.min_gamma /= n;
  m.coverage_area /= n;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(idx, v.size() - 1)];
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string means_cells(const MetricMeans& m) {
  return std::to_string(m.count) + ',' + format_number(m.path_length) + ',' + format_number(m.smoothness) + ',' +
         format_number(m.min_gamma) + ',' + format_number(m.coverage_area);
}

std::string ms_cell(double v, bool timing) { return timing ? format_number(v) : std::string(); }

}  // namespace

const PlannerSummary& CampaignSummary::get(PlannerKind kind) const {
  for (const auto& p : planners) {
    if (p.planner == kind) return p;
  }
  throw Error("campaign has no results for planner " + planner_name(kind));
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

fs::path make_campaign_dir(const fs::path& base, const std::string& name) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
  fs::create_directories(base);
  const std::string stem = name + "-" + stamp;
  fs::path dir = base / stem;
  for (int n = 1; !fs::create_directory(dir); ++n) dir = base / (stem + "-" + std::to_string(n));
  return dir;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg, const std::string& command) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["config"] = cfg.to_text();
  j["config_sha256"] = sha256_hex(cfg.to_text());
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  for (const auto& f : files) outputs[fs::relative(f, dir).generic_string()] = sha256_hex(read_text(f));
  j["outputs"] = outputs;
  write_text(dir / "manifest.json", j.dump(2) + "\n");
}

CampaignSummary monte_carlo(const ExperimentConfig& cfg, const std::vector<PlannerKind>& planners, int runs,
                            const OutputDir& out) {
  if (runs < 1) throw Error("monte_carlo: runs must be >= 1");
  CampaignSummary summary;
  std::vector<PlannerKind> unique;
  std::set<PlannerKind> seen;
  for (PlannerKind p : planners) {
    if (seen.insert(p).second) {
      unique.push_back(p);
    } else {
      summary.warnings.push_back("duplicate planner '" + planner_name(p) + "' ignored");
    }
  }
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';

  const auto channel = make_channel(cfg);
  std::string metrics = metrics_csv_header();
  for (PlannerKind planner : unique) {
    PlannerSummary ps;
    ps.planner = planner;
    for (int i = 0; i < runs; ++i) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
      RunResult r = run_single(cfg, planner, seed, channel);
      if (out) {
        write_text(*out / "runs" / (planner_name(planner) + "_" + std::to_string(seed) + "_steps.csv"),
                   steps_csv(r.steps, cfg.timing));
      }
      metrics += metrics_csv_row(planner_name(planner), seed, r.metrics, cfg.timing);
      ++ps.runs;
      accumulate(ps.all, r.metrics);
      if (r.metrics.success) {
        ++ps.successes;
        accumulate(ps.succeeded, r.metrics);
      } else {
        accumulate(ps.failed, r.metrics);
      }
      ps.emergencies += r.metrics.emergencies;
      ps.step_ms.insert(ps.step_ms.end(), r.step_ms.begin(), r.step_ms.end());
      ps.per_run.push_back(std::move(r.metrics));
    }
    finish(ps.all);
    finish(ps.succeeded);
    finish(ps.failed);
    ps.success_rate = 100.0 * static_cast<double>(ps.successes) / static_cast<double>(ps.runs);
    ps.mean_step_ms = mean_of(ps.step_ms);
    summary.planners.push_back(std::move(ps));
  }

  const PlannerSummary* pid = nullptr;
  for (const auto& p : summary.planners) {
    if (p.planner == PlannerKind::pid) pid = &p;
  }
  for (auto& p : summary.planners) {
    p.coverage_gain = pid != nullptr && pid->all.coverage_area > 0.0 ? p.all.coverage_area / pid->all.coverage_area
                                                                       : std::numeric_limits<double>::quiet_NaN();
  }

  if (out) {
    write_text(*out / "metrics.csv", metrics);
    std::string s =
        "planner,runs,successes,success_rate,all_count,all_path_length,all_smoothness,all_min_gamma,all_coverage,"
        "ok_count,ok_path_length,ok_smoothness,ok_min_gamma,ok_coverage,"
        "failed_count,failed_path_length,failed_smoothness,failed_min_gamma,failed_coverage,"
        "coverage_gain,emergencies,mean_step_ms\n";
    for (const auto& p : summary.planners) {
      s += planner_name(p.planner) + ',' + std::to_string(p.runs) + ',' + std::to_string(p.successes) + ',' +
           format_number(p.success_rate) + ',' + means_cells(p.all) + ',' + means_cells(p.succeeded) + ',' +
           means_cells(p.failed) + ',' + format_number(p.coverage_gain) + ',' + std::to_string(p.emergencies) + ',' +
           ms_cell(p.mean_step_ms, cfg.timing) + '\n';
    }
    write_text(*out / "summary.csv", s);
  }
  return summary;
}

std::vector<SweepRow> sweep_horizon(const ExperimentConfig& cfg, const std::vector<int>& horizons, int runs,
                                    const OutputDir& out) {
  if (runs < 1) throw Error("sweep_horizon: runs must be >= 1");
  const auto channel = make_channel(cfg);
  std::vector<SweepRow> rows;
  for (int n : horizons) {
    if (n < 1) throw Error("sweep_horizon: horizons must be >= 1");
    ExperimentConfig c = cfg;
    c.mpc.horizon = n;
    SweepRow row;
    row.horizon = n;
    std::vector<double> ms;
    std::size_t ok = 0;
    for (int i = 0; i < runs; ++i) {
      const RunResult r = run_single(c, PlannerKind::ifds_mpc, cfg.seed + static_cast<std::uint64_t>(i), channel);
      row.mean_cost += r.executed_cost / runs;
      ms.insert(ms.end(), r.step_ms.begin(), r.step_ms.end());
      ok += r.metrics.success ? 1 : 0;
    }
    row.mean_step_ms = mean_of(ms);
    row.p95_step_ms = percentile(ms, 0.95);
    row.success_rate = 100.0 * static_cast<double>(ok) / runs;
    rows.push_back(row);
  }
  if (out) {
    std::string s = "N,mean_cost,mean_step_ms,p95_step_ms,success_rate\n";
    for (const auto& r : rows) {
      s += std::to_string(r.horizon) + ',' + format_number(r.mean_cost) + ',' + ms_cell(r.mean_step_ms, cfg.timing) +
           ',' + ms_cell(r.p95_step_ms, cfg.timing) + ',' + format_number(r.success_rate) + '\n';
    }
    write_text(*out / "sweep.csv", s);
  }
  return rows;
}

AblationResult ablate_dfaa(const ExperimentConfig& cfg, const OutputDir& out) {
  if (!preset_by_name(cfg.preset).has_corridor()) throw Error("ablation preset required");
  const auto channel = make_channel(cfg);
  AblationResult res;
  res.eta = cfg.ifds.eta > 0.0 ? cfg.ifds.eta : 0.6;
  ExperimentConfig on = cfg;
  on.ifds.eta = res.eta;
  ExperimentConfig off = cfg;
  off.ifds.eta = 0.0;
  res.with_dfaa = run_single(on, PlannerKind::ifds, cfg.seed, channel);
  res.without_dfaa = run_single(off, PlannerKind::ifds, cfg.seed, channel);
  if (out) {
    const auto& a = res.with_dfaa.steps;
    const auto& b = res.without_dfaa.steps;
    std::string s = "step,t,z_dfaa,w_eff_dfaa,gsd_dfaa,dfaa_active,z_fixed,w_eff_fixed,gsd_fixed\n";
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
      s += std::to_string(i) + ',' + format_number(static_cast<double>(i) * cfg.limits.dt) + ',';
      if (i < a.size()) {
        s += format_number(a[i].position.z()) + ',' + format_number(a[i].w_eff) + ',' + format_number(a[i].gsd) + ',' +
             (a[i].dfaa_active ? "1" : "0");
      } else {
        s += ",,,";
      }
      s += ',';
      if (i < b.size()) {
        s += format_number(b[i].position.z()) + ',' + format_number(b[i].w_eff) + ',' + format_number(b[i].gsd);
      } else {
        s += ",,";
      }
      s += '\n';
    }
    write_text(*out / "ablation.csv", s);
    write_text(*out / "runs" / "ifds_dfaa_steps.csv", steps_csv(a, cfg.timing));
    write_text(*out / "runs" / "ifds_fixed_steps.csv", steps_csv(b, cfg.timing));
  }
  return res;
}

std::vector<RobustnessRow> robustness(const ExperimentConfig& cfg, const std::vector<double>& sigmas, int runs,
                                      const OutputDir& out) {
  if (runs < 1) throw Error("robustness: runs must be >= 1");
  const auto channel = make_channel(cfg);
  std::vector<RobustnessRow> rows;
  std::string metrics = "sigma," + metrics_csv_header();
  for (double sigma : sigmas) {
    if (!(sigma >= 0.0)) throw Error("robustness: sigma must be non-negative");
    ExperimentConfig c = cfg;
    c.noise_sigma = sigma;
    RobustnessRow row;
    row.sigma = sigma;
    std::size_t ok = 0;
    for (int i = 0; i < runs; ++i) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
      const RunResult r = run_single(c, cfg.planner, seed, channel);
      ok += r.metrics.success ? 1 : 0;
      metrics += format_number(sigma) + ',' + metrics_csv_row(planner_name(cfg.planner), seed, r.metrics, cfg.timing);
    }
    row.runs = static_cast<std::size_t>(runs);
    row.success_rate = 100.0 * static_cast<double>(ok) / runs;
    rows.push_back(row);
  }
  if (out) {
    std::string s = "sigma,runs,success_rate\n";
    for (const auto& r : rows) s += format_number(r.sigma) + ',' + std::to_string(r.runs) + ',' + format_number(r.success_rate) + '\n';
    write_text(*out / "robustness.csv", s);
    write_text(*out / "metrics.csv", metrics);
  }
  return rows;
}

}  // namespace shadowplan
