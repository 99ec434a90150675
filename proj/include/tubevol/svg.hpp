#pragma once

// Self-contained SVG rendering of a FigureSeries: scatter points, overlay curves
// and an optional marginal histogram drawn along the right edge.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "tubevol/census.hpp"
#include "tubevol/csv.hpp"

namespace tubevol::svg {

namespace detail {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.03 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

// Tick spacing of 1, 2 or 5 times a power of ten giving about `target` ticks.
inline double nice_step(double span, int target = 6) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) { return csv::format_sig(v, 6); }

}  // namespace detail

inline void render(std::ostream& out, const FigureSeries& fig) {
  constexpr double width = 720, height = 480;
  constexpr double left = 80, right = 30, top = 40, bottom = 60;
  const double hist_w = fig.histogram ? 110.0 : 0.0;
  const double plot_w = width - left - right - hist_w;
  const double plot_h = height - top - bottom;

  detail::Range xr, yr;
  for (const DataTable* t : {&fig.points, &fig.curves}) {
    if (t->columns.empty()) continue;
    for (double v : t->columns.front().values) xr.add(v);
    for (std::size_t c = 1; c < t->columns.size(); ++c)
      for (double v : t->columns[c].values) yr.add(v);
  }
  xr.finish();
  yr.finish();
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  static constexpr std::array<const char*, 4> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<title>" << detail::escape(fig.name) << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes and ticks
  out << "<g stroke=\"black\" fill=\"none\">\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h << "\"/>\n";
  out << "</g>\n<g fill=\"black\">\n";
  const double xs = detail::nice_step(xr.hi - xr.lo);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi; t += xs) {
    const double x = px(t);
    out << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\"" << top + plot_h + 5
        << "\" stroke=\"black\"/>";
    out << "<text x=\"" << x << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
        << detail::num(std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
  }
  const double ys = detail::nice_step(yr.hi - yr.lo);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi; t += ys) {
    const double y = py(t);
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\" stroke=\"black\"/>";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
        << detail::num(std::abs(t) < 1e-12 * ys ? 0.0 : t) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << detail::escape(fig.x_label) << "</text>\n";
  out << "<text transform=\"translate(20," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::escape(fig.y_label) << "</text>\n";
  out << "</g>\n";

  // scatter
  if (!fig.points.empty()) {
    const auto& x = fig.points.columns.front().values;
    for (std::size_t c = 1; c < fig.points.columns.size(); ++c) {
      const auto& col = fig.points.columns[c];
      out << "<g fill=\"" << palette[(c - 1) % palette.size()] << "\" fill-opacity=\"0.6\" class=\"" << col.name
          << "\">\n";
      for (std::size_t i = 0; i < col.values.size(); ++i) {
        if (!std::isfinite(col.values[i])) continue;
        out << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(col.values[i]) << "\" r=\"1.6\">";
        if (!fig.points.labels.empty()) out << "<title>" << detail::escape(fig.points.labels[i]) << "</title>";
        out << "</circle>\n";
      }
      out << "</g>\n";
    }
  }

  // curves
  if (!fig.curves.empty()) {
    const auto& x = fig.curves.columns.front().values;
    for (std::size_t c = 1; c < fig.curves.columns.size(); ++c) {
      const auto& col = fig.curves.columns[c];
      out << "<polyline fill=\"none\" stroke=\"" << (c == 1 ? "black" : "#888888") << "\" stroke-width=\"1.5\" class=\""
          << col.name << "\" points=\"";
      for (std::size_t i = 0; i < col.values.size(); ++i) {
        const double y = std::clamp(col.values[i], yr.lo, yr.hi);
        out << px(x[i]) << ',' << py(y) << ' ';
      }
      out << "\"/>\n";
    }
  }

  // marginal histogram, sharing the y axis
  if (fig.histogram) {
    const auto& h = *fig.histogram;
    const std::size_t peak = std::max<std::size_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));
    const double x0 = left + plot_w + 10;
    out << "<g fill=\"#7f7f7f\" class=\"histogram\">\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      const double y_top = py(std::min(h.edges[i + 1], yr.hi));
      const double y_bot = py(std::max(h.edges[i], yr.lo));
      const double w = (hist_w - 20) * static_cast<double>(h.counts[i]) / static_cast<double>(peak);
      out << "<rect x=\"" << x0 << "\" y=\"" << y_top << "\" width=\"" << w << "\" height=\""
          << std::max(0.0, y_bot - y_top) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace tubevol::svg
