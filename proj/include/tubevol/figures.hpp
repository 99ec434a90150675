#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tubevol/census.hpp"
#include "tubevol/errors.hpp"
#include "tubevol/svg.hpp"

namespace tubevol {

/// Writes each series to `dir`: `<name>.csv` (scatter points, or the curves when a
/// series has no points), `<name>_curves.csv` for overlay curves, `<name>_hist.csv`
/// for a marginal histogram, and `<name>.svg` when `with_svg`. Returns the paths written.
inline std::vector<std::filesystem::path> write_figures(const std::vector<FigureSeries>& series,
                                                        const std::filesystem::path& dir, bool with_svg = true) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir.string() + "'");

  std::vector<fs::path> written;
  auto open = [&](const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw InputError("cannot write '" + p.string() + "'");
    written.push_back(p);
    return f;
  };
  for (const auto& s : series) {
    const bool has_points = !s.points.empty() || !s.points.columns.empty();
    {
      auto f = open(dir / (s.name + ".csv"));
      (has_points ? s.points : s.curves).write_csv(f);
    }
    if (has_points && !s.curves.columns.empty()) {
      auto f = open(dir / (s.name + "_curves.csv"));
      s.curves.write_csv(f);
    }
    if (s.histogram) {
      auto f = open(dir / (s.name + "_hist.csv"));
      f << "bin_lo,bin_hi,count\n";
      for (std::size_t i = 0; i < s.histogram->counts.size(); ++i)
        f << csv::format_sig(s.histogram->edges[i]) << ',' << csv::format_sig(s.histogram->edges[i + 1]) << ','
          << s.histogram->counts[i] << '\n';
    }
    if (with_svg) {
      auto f = open(dir / (s.name + ".svg"));
      svg::render(f, s);
    }
  }
  return written;
}

}  // namespace tubevol
