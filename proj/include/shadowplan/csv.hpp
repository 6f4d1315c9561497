#pragma once

#include "shadowplan/metrics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace shadowplan {

/// Shortest round-trip decimal form; "inf"/"-inf" for infinities, empty for NaN.
std::string format_number(double v);

/// Per-step log. step_compute_ms is left blank unless `timing` is set.
std::string steps_csv(const std::vector<StepRecord>& steps, bool timing);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index; throws when the column is absent.
  std::size_t column(const std::string& name) const;
  bool has(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Inverse of steps_csv.
std::vector<StepRecord> steps_from_csv(const CsvTable& table);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& planner, std::uint64_t seed, const RunMetrics& m, bool timing);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace shadowplan
