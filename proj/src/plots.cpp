#include "shadowplan/plots.hpp"

#include "shadowplan/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace shadowplan {

namespace fs = std::filesystem;

namespace {

struct Series {
  std::vector<double> x, y;
};

std::string svg_polyline(const Series& s, const std::string& title, const std::string& xlabel,
                         const std::string& ylabel) {
  constexpr double kW = 800.0, kH = 400.0, kPad = 40.0;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    x0 = std::min(x0, s.x[i]);
    x1 = std::max(x1, s.x[i]);
    y0 = std::min(y0, s.y[i]);
    y1 = std::max(y1, s.y[i]);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<title>" << title << "</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << " ["
      << format_number(x0) << ", " << format_number(x1) << "]</text>\n"
      << "<text x=\"12\" y=\"" << kH / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 " << kH / 2 << ")\">"
      << ylabel << " [" << format_number(y0) << ", " << format_number(y1) << "]</text>\n"
      << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double px = kPad + (s.x[i] - x0) / (x1 - x0) * (kW - 2 * kPad);
    const double py = kH - kPad - (s.y[i] - y0) / (y1 - y0) * (kH - 2 * kPad);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
    out << buf;
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

}  // namespace

std::vector<fs::path> emit_plots(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("plots: '" + dir.string() + "' is not a directory");
  std::vector<fs::path> logs;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 10 && name.ends_with("_steps.csv")) logs.push_back(e.path());
  }
  if (logs.empty()) throw Error("plots: no step CSV files in '" + dir.string() + "'");
  std::sort(logs.begin(), logs.end());

  const fs::path plot_dir = dir / "plots";
  std::vector<fs::path> written;
  for (const auto& log : logs) {
    const CsvTable table = read_csv(log);
    std::vector<std::string> missing;
    for (const char* c : {"t", "x", "y", "z"}) {
      if (!table.has(c)) missing.emplace_back(c);
    }
    if (!missing.empty()) {
      std::string msg = "plots: " + log.string() + " lacks columns:";
      for (const auto& m : missing) msg += " " + m;
      throw Error(msg);
    }
    const std::size_t ct = table.column("t"), cx = table.column("x"), cy = table.column("y"), cz = table.column("z");
    Series top, alt;
    std::string dat = "# t x y z\n";
    for (const auto& row : table.rows) {
      const double t = std::stod(row[ct]), x = std::stod(row[cx]), y = std::stod(row[cy]), z = std::stod(row[cz]);
      top.x.push_back(x);
      top.y.push_back(y);
      alt.x.push_back(t);
      alt.y.push_back(z);
      dat += row[ct] + ' ' + row[cx] + ' ' + row[cy] + ' ' + row[cz] + '\n';
    }
    std::string stem = fs::relative(log, dir).generic_string();
    stem = stem.substr(0, stem.size() - 4);
    std::replace(stem.begin(), stem.end(), '/', '_');

    const fs::path top_svg = plot_dir / (stem + "_top.svg");
    const fs::path alt_svg = plot_dir / (stem + "_altitude.svg");
    const fs::path dat_file = plot_dir / (stem + ".dat");
    const fs::path gp_file = plot_dir / (stem + ".gp");
    write_text(top_svg, svg_polyline(top, stem + " top view", "x (m)", "y (m)"));
    write_text(alt_svg, svg_polyline(alt, stem + " altitude", "t (s)", "z (m)"));
    write_text(dat_file, dat);
    write_text(gp_file, "set terminal svg size 800,400\n"
                        "set output '" + stem + "_gnuplot_top.svg'\n"
                        "set xlabel 'x (m)'\nset ylabel 'y (m)'\nset size ratio -1\n"
                        "plot '" + stem + ".dat' using 2:3 with lines title 'path'\n"
                        "set output '" + stem + "_gnuplot_altitude.svg'\n"
                        "set size noratio\nset xlabel 't (s)'\nset ylabel 'z (m)'\n"
                        "plot '" + stem + ".dat' using 1:4 with lines title 'altitude'\n");
    written.insert(written.end(), {top_svg, alt_svg, dat_file, gp_file});
  }
  return written;
}

}  // namespace shadowplan
