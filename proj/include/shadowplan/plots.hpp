#pragma once

#include <filesystem>
#include <vector>

namespace shadowplan {

/// For every `*_steps.csv` under `dir`, writes a top-view and an altitude
/// SVG plus a gnuplot data/script pair into `dir/plots`. Returns the files
/// written. Throws when no step log is found or a log lacks t, x, y or z.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir);

}  // namespace shadowplan
