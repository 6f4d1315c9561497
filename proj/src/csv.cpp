#include "shadowplan/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace shadowplan {

namespace {

double parse_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("csv: malformed number '" + s + "'");
  return v;
}

const char* kStepColumns[] = {"t",          "x",       "y",        "z",          "psi",
                              "theta",      "chosen_candidate", "T_k", "A_k",     "S_k",
                              "J_k",        "W_eff",   "dfaa_active", "min_gamma", "step_compute_ms",
                              "coverage_new_m2", "coverage_ratio", "gsd", "lyapunov_v", "emergency"};

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string steps_csv(const std::vector<StepRecord>& steps, bool timing) {
  std::ostringstream out;
  for (std::size_t i = 0; i < std::size(kStepColumns); ++i) out << (i ? "," : "") << kStepColumns[i];
  out << '\n';
  for (const StepRecord& r : steps) {
    out << format_number(r.t) << ',' << format_number(r.position.x()) << ',' << format_number(r.position.y()) << ','
        << format_number(r.position.z()) << ',' << format_number(r.heading) << ',' << format_number(r.pitch) << ',';
    if (r.has_costs && r.chosen >= 0) out << r.chosen;
    out << ',';
    if (r.has_costs) {
      out << format_number(r.tracking) << ',' << format_number(r.obstacle) << ',' << format_number(r.smoothness) << ','
          << format_number(r.total) << ',';
    } else {
      out << ",,,,";
    }
    out << format_number(r.w_eff) << ',' << (r.dfaa_active ? 1 : 0) << ',' << format_number(r.min_gamma) << ',';
    if (timing) out << format_number(r.step_ms);
    out << ',' << format_number(r.coverage_new) << ',' << format_number(r.coverage_ratio) << ','
        << format_number(r.gsd) << ',' << format_number(r.lyapunov) << ',' << (r.emergency ? 1 : 0) << '\n';
  }
  return out.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error("csv: missing column '" + name + "'");
}

bool CsvTable::has(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      fields.resize(t.header.size());
      t.rows.push_back(std::move(fields));
    }
  }
  if (first) throw Error("csv: empty input");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

std::vector<StepRecord> steps_from_csv(const CsvTable& table) {
  std::vector<std::size_t> idx;
  for (const char* c : kStepColumns) idx.push_back(table.column(c));
  std::vector<StepRecord> out;
  for (const auto& row : table.rows) {
    auto num = [&](std::size_t k) { return parse_field(row[idx[k]]); };
    StepRecord r;
    r.t = num(0);
    r.position = Vec3(num(1), num(2), num(3));
    r.heading = num(4);
    r.pitch = num(5);
    const double chosen = num(6);
    r.chosen = std::isnan(chosen) ? -1 : static_cast<int>(chosen);
    r.has_costs = !row[idx[7]].empty();
    r.tracking = num(7);
    r.obstacle = num(8);
    r.smoothness = num(9);
    r.total = num(10);
    r.w_eff = num(11);
    r.dfaa_active = num(12) != 0.0;
    r.min_gamma = num(13);
    const double ms = num(14);
    r.step_ms = std::isnan(ms) ? 0.0 : ms;
    r.coverage_new = num(15);
    r.coverage_ratio = num(16);
    r.gsd = num(17);
    r.lyapunov = num(18);
    r.emergency = num(19) != 0.0;
    out.push_back(r);
  }
  return out;
}

std::string metrics_csv_header() {
  return "planner,seed,success,reached_goal,collided,path_length,smoothness,min_gamma,coverage_area,"
         "mean_coverage_ratio,mean_gsd,min_altitude,steps,emergencies,mean_step_ms\n";
}

std::string metrics_csv_row(const std::string& planner, std::uint64_t seed, const RunMetrics& m, bool timing) {
  double gsd_sum = 0.0;
  for (double g : m.gsd_series) gsd_sum += g;
  const double mean_gsd = m.gsd_series.empty() ? 0.0 : gsd_sum / static_cast<double>(m.gsd_series.size());
  std::ostringstream out;
  out << planner << ',' << seed << ',' << (m.success ? 1 : 0) << ',' << (m.reached_goal ? 1 : 0) << ','
      << (m.collided ? 1 : 0) << ',' << format_number(m.path_length) << ',' << format_number(m.smoothness) << ','
      << format_number(m.min_gamma) << ',' << format_number(m.coverage_area) << ','
      << format_number(m.mean_coverage_ratio) << ',' << format_number(mean_gsd) << ','
      << format_number(m.min_altitude) << ',' << m.steps << ',' << m.emergencies << ',';
  if (timing) out << format_number(m.mean_step_ms);
  out << '\n';
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace shadowplan
