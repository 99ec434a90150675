#pragma once

// Census pipeline: drill records in, per-record bound evaluation, dataset
// statistics and the data series behind the comparison plots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tubevol/csv.hpp"
#include "tubevol/errors.hpp"
#include "tubevol/hypkernel.hpp"
#include "tubevol/surgery.hpp"

namespace tubevol {

/// One (M, gamma) data point: volumes of the closed and drilled manifolds plus the
/// length and tube radius of the drilled geodesic.
struct DrillRecord {
  std::string name;
  VolumePair volumes;
  TubeData tube;
};

inline constexpr const char* kDatasetHeader = "name,v_fill,v_drill,length,radius";

struct RejectedRow {
  int line;
  std::string message;
};

struct IngestResult {
  std::vector<DrillRecord> records;
  std::vector<RejectedRow> rejected;
};

/// Reads a dataset CSV. Malformed lines (wrong header, field count, or numbers)
/// throw InputError; well-formed rows that break a record invariant or repeat a
/// name are collected in `rejected` with their line numbers.
inline IngestResult ingest(std::istream& in) {
  csv::LineReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw InputError("dataset: missing header '" + std::string(kDatasetHeader) + "'");
  if (fields != std::vector<std::string>{"name", "v_fill", "v_drill", "length", "radius"})
    throw InputError("dataset line " + std::to_string(reader.line_number()) + ": expected header '" +
                     kDatasetHeader + "'");

  IngestResult out;
  std::unordered_set<std::string> names;
  while (reader.next(fields)) {
    const int line = reader.line_number();
    const std::string where = "dataset line " + std::to_string(line);
    if (fields.size() != 5)
      throw InputError(where + ": expected 5 fields, got " + std::to_string(fields.size()));
    const double v_fill = csv::parse_double(fields[1], where);
    const double v_drill = csv::parse_double(fields[2], where);
    const double length = csv::parse_double(fields[3], where);
    const double radius = csv::parse_double(fields[4], where);
    if (fields[0].empty()) {
      out.rejected.push_back({line, "empty record name"});
      continue;
    }
    if (names.count(fields[0])) {
      out.rejected.push_back({line, "duplicate record name '" + fields[0] + "'"});
      continue;
    }
    try {
      out.records.push_back({fields[0], VolumePair(v_fill, v_drill), TubeData(length, radius)});
      names.insert(fields[0]);
    } catch (const DomainError& e) {
      out.rejected.push_back({line, "record '" + fields[0] + "': " + e.what()});
    }
  }
  return out;
}

inline IngestResult ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset '" + path + "'");
  return ingest(in);
}

/// Writes records in the ingest format with round-trip exact decimals.
inline void write_dataset(std::ostream& out, const std::vector<DrillRecord>& records) {
  out << kDatasetHeader << '\n';
  for (const auto& r : records) {
    out << r.name << ',' << csv::format_exact(r.volumes.v_fill()) << ',' << csv::format_exact(r.volumes.v_drill())
        << ',' << csv::format_exact(r.tube.length()) << ',' << csv::format_exact(r.tube.radius()) << '\n';
  }
}

/// Every bound and ratio for a single record.
struct BoundReport {
  std::string name;
  double length;
  double radius;
  double b;
  double c_o;
  double c_p;
  double v_est_old;
  double v_est_perelman;
  double overshoot_old;
  double overshoot_perelman;
  double delta_v;
  double dv_over_pi_l;
  double b_over_vdrill;
  bool perelman_ok;  ///< V_drill <= C_P B
  bool old_ok;       ///< V_drill <= C_O B
  bool bridgeman_ok; ///< dV <= pi L
  bool b_le_vdrill;  ///< B <= V_drill (warning only)
  bool hk_regime;
};

inline BoundReport evaluate(const DrillRecord& r) {
  const double v_fill = r.volumes.v_fill();
  const double v_drill = r.volumes.v_drill();
  const double len = r.tube.length();
  const double rad = r.tube.radius();
  BoundReport rep{};
  rep.name = r.name;
  rep.length = len;
  rep.radius = rad;
  rep.b = bound_base_B(v_fill, r.tube);
  rep.c_o = factor_co(rad);
  rep.c_p = factor_cp(rad);
  rep.v_est_old = rep.c_o * rep.b;
  rep.v_est_perelman = rep.c_p * rep.b;
  rep.delta_v = v_drill - v_fill;
  rep.overshoot_old = (rep.v_est_old - v_drill) / rep.delta_v;
  rep.overshoot_perelman = (rep.v_est_perelman - v_drill) / rep.delta_v;
  rep.dv_over_pi_l = rep.delta_v / (kPi * len);
  rep.b_over_vdrill = rep.b / v_drill;
  rep.perelman_ok = v_drill <= rep.v_est_perelman;
  rep.old_ok = v_drill <= rep.v_est_old;
  rep.bridgeman_ok = rep.delta_v <= kPi * len;
  rep.b_le_vdrill = rep.b <= v_drill;
  rep.hk_regime = hodgson_kerckhoff_regime(len, rad);
  return rep;
}

/// Evaluates every record, preserving order. `threads` = 0 picks the hardware concurrency.
inline std::vector<BoundReport> evaluate(const std::vector<DrillRecord>& records, unsigned threads = 1) {
  std::vector<BoundReport> out(records.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, records.size() / 1024)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < records.size(); ++i) out[i] = evaluate(records[i]);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (records.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(records.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = evaluate(records[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

/// Running count, mean and sum of squared deviations; `merge` combines partial results.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  /// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
  double stddev() const { return n < 2 ? 0.0 : std::sqrt(m2 / static_cast<double>(n - 1)); }
};

struct Histogram {
  std::vector<double> edges;  ///< bins + 1 increasing edges; the last bin is closed
  std::vector<std::size_t> counts;
};

/// Equal-width histogram over the observed range of `values`.
inline Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw DomainError("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  double lo = 0.0, hi = 1.0;
  if (!values.empty()) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(lo + width * static_cast<double>(i));
  h.edges.back() = hi;
  for (double v : values) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(k, bins - 1)]++;
  }
  return h;
}

struct ViolationCounts {
  std::size_t perelman = 0;
  std::size_t old = 0;
  std::size_t bridgeman = 0;
  std::size_t b_le_vdrill = 0;  ///< warnings only
};

struct DatasetStats {
  std::size_t count = 0;
  double mean_dv_over_pi_l = 0.0;
  double stddev_dv_over_pi_l = 0.0;
  Histogram histogram;
  ViolationCounts violations;
  std::size_t hk_regime = 0;
  double length_min = 0.0, length_max = 0.0;
  double radius_min = 0.0, radius_max = 0.0;
};

inline DatasetStats statistics(const std::vector<BoundReport>& reports, std::size_t bins = 40) {
  if (reports.empty()) throw DomainError("statistics of an empty dataset");
  DatasetStats s;
  s.count = reports.size();
  Moments m;
  std::vector<double> ratios;
  ratios.reserve(reports.size());
  s.length_min = s.radius_min = std::numeric_limits<double>::infinity();
  s.length_max = s.radius_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    m.add(r.dv_over_pi_l);
    ratios.push_back(r.dv_over_pi_l);
    s.violations.perelman += !r.perelman_ok;
    s.violations.old += !r.old_ok;
    s.violations.bridgeman += !r.bridgeman_ok;
    s.violations.b_le_vdrill += !r.b_le_vdrill;
    s.hk_regime += r.hk_regime;
    s.length_min = std::min(s.length_min, r.length);
    s.length_max = std::max(s.length_max, r.length);
    s.radius_min = std::min(s.radius_min, r.radius);
    s.radius_max = std::max(s.radius_max, r.radius);
  }
  s.mean_dv_over_pi_l = m.mean;
  s.stddev_dv_over_pi_l = m.stddev();
  s.histogram = make_histogram(ratios, bins);
  return s;
}

inline void write_report(std::ostream& out, const std::vector<BoundReport>& reports) {
  out << "name,B,c_o,c_p,v_est_old,v_est_perelman,overshoot_old,overshoot_perelman,delta_v,dv_over_pi_l,"
         "b_over_vdrill,perelman_ok,old_ok,bridgeman_ok,b_le_vdrill,hk_regime\n";
  using csv::format_bool;
  using csv::format_sig;
  for (const auto& r : reports) {
    out << r.name << ',' << format_sig(r.b) << ',' << format_sig(r.c_o) << ',' << format_sig(r.c_p) << ','
        << format_sig(r.v_est_old) << ',' << format_sig(r.v_est_perelman) << ',' << format_sig(r.overshoot_old) << ','
        << format_sig(r.overshoot_perelman) << ',' << format_sig(r.delta_v) << ',' << format_sig(r.dv_over_pi_l) << ','
        << format_sig(r.b_over_vdrill) << ',' << format_bool(r.perelman_ok) << ',' << format_bool(r.old_ok) << ','
        << format_bool(r.bridgeman_ok) << ',' << format_bool(r.b_le_vdrill) << ',' << format_bool(r.hk_regime)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Figure series

struct Column {
  std::string name;
  std::vector<double> values;
};

/// Columns of equal length, optionally with a label per row.
struct DataTable {
  std::vector<std::string> labels;
  std::vector<Column> columns;

  bool empty() const { return columns.empty() || columns.front().values.empty(); }
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().values.size(); }

  const Column& column(const std::string& name) const {
    for (const auto& c : columns)
      if (c.name == name) return c;
    throw DomainError("no column named '" + name + "'");
  }

  void write_csv(std::ostream& out) const {
    bool first = true;
    if (!labels.empty()) {
      out << "name";
      first = false;
    }
    for (const auto& c : columns) {
      out << (first ? "" : ",") << c.name;
      first = false;
    }
    out << '\n';
    for (std::size_t i = 0; i < rows(); ++i) {
      first = true;
      if (!labels.empty()) {
        out << labels[i];
        first = false;
      }
      for (const auto& c : columns) {
        out << (first ? "" : ",") << csv::format_sig(c.values[i]);
        first = false;
      }
      out << '\n';
    }
  }
};

/// Scatter points (first column is x, the rest are y series), overlay curves in the
/// same layout, and an optional marginal histogram of the first y series.
struct FigureSeries {
  std::string name;
  std::string x_label;
  std::string y_label;
  DataTable points;
  DataTable curves;
  std::optional<Histogram> histogram;
};

struct FigureOptions {
  double curve_r_min = 0.05;
  double curve_r_max = 3.0;
  std::size_t curve_points = 512;
  std::size_t bins = 40;
  double zoom_min_r = 0.6;
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw DomainError("linspace needs at least 2 points");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = b;
  return v;
}

/// The five series: C_O/C_P against R, overshoot against R (all and R >= zoom_min_r),
/// B/V_drill against R with the 1/C_P and 1/C_O curves, and dV/(pi L) against L.
inline std::vector<FigureSeries> figure_series(const std::vector<BoundReport>& reports, const FigureOptions& opt = {}) {
  if (reports.empty()) throw DomainError("figure series of an empty dataset");
  if (!(opt.curve_r_min > 0.0) || !(opt.curve_r_max > opt.curve_r_min))
    throw DomainError("curve range must satisfy 0 < r_min < r_max");
  const auto rs = linspace(opt.curve_r_min, opt.curve_r_max, opt.curve_points);
  std::vector<FigureSeries> out;

  {
    FigureSeries f{"fig_ratio_curve", "tube radius R", "C_O / C_P", {}, {}, {}};
    Column ratio{"c_o_over_c_p", {}};
    for (double r : rs) ratio.values.push_back(factor_co(r) / factor_cp(r));
    f.curves.columns = {{"R", rs}, std::move(ratio)};
    out.push_back(std::move(f));
  }

  auto overshoot = [&](const std::string& name, double min_r) {
    FigureSeries f{name, "tube radius R", "(V_est - V_drill) / (V_drill - V_fill)", {}, {}, {}};
    Column x{"R", {}}, p{"overshoot_perelman", {}}, o{"overshoot_old", {}};
    for (const auto& r : reports) {
      if (r.radius < min_r) continue;
      f.points.labels.push_back(r.name);
      x.values.push_back(r.radius);
      p.values.push_back(r.overshoot_perelman);
      o.values.push_back(r.overshoot_old);
    }
    f.points.columns = {std::move(x), std::move(p), std::move(o)};
    return f;
  };
  out.push_back(overshoot("fig_overshoot", -std::numeric_limits<double>::infinity()));
  out.push_back(overshoot("fig_overshoot_zoom", opt.zoom_min_r));

  {
    FigureSeries f{"fig_b_over_vdrill", "tube radius R", "B / V_drill", {}, {}, {}};
    Column x{"R", {}}, y{"b_over_vdrill", {}};
    for (const auto& r : reports) {
      f.points.labels.push_back(r.name);
      x.values.push_back(r.radius);
      y.values.push_back(r.b_over_vdrill);
    }
    f.points.columns = {std::move(x), std::move(y)};
    Column inv_p{"inv_c_p", {}}, inv_o{"inv_c_o", {}};
    for (double r : rs) {
      inv_p.values.push_back(1.0 / factor_cp(r));
      inv_o.values.push_back(1.0 / factor_co(r));
    }
    f.curves.columns = {{"R", rs}, std::move(inv_p), std::move(inv_o)};
    out.push_back(std::move(f));
  }

  {
    FigureSeries f{"fig_dv_over_pil", "length L", "dV / (pi L)", {}, {}, {}};
    Column x{"L", {}}, y{"dv_over_pi_l", {}};
    for (const auto& r : reports) {
      f.points.labels.push_back(r.name);
      x.values.push_back(r.length);
      y.values.push_back(r.dv_over_pi_l);
    }
    f.histogram = make_histogram(y.values, opt.bins);
    f.points.columns = {std::move(x), std::move(y)};
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic data

struct SynthesisOptions {
  std::size_t count = 20;
  std::uint64_t seed = 0;
  double noise_sigma = 0.017;
  double length_min = 0.3, length_max = 2.5;
  double radius_min = 0.4, radius_max = 1.6;
  double v_fill_min = 0.94, v_fill_max = 6.0;
};

/// Synthetic census with dV = pi L (1/2 + eps), eps ~ normal(0, noise_sigma) clipped at
/// four standard deviations. L, R and V_fill are drawn uniformly; when a draw would
/// violate V_drill <= C_P B the geometry is redrawn with the same eps, so eps keeps
/// its distribution and every record satisfies the bound.
inline std::vector<DrillRecord> synthesize(const SynthesisOptions& o) {
  auto check_range = [](double lo, double hi, const char* what) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
      throw DomainError(std::string("synthesize: invalid ") + what + " range");
  };
  check_range(o.length_min, o.length_max, "length");
  check_range(o.radius_min, o.radius_max, "radius");
  check_range(o.v_fill_min, o.v_fill_max, "filled volume");
  if (!(o.noise_sigma >= 0.0) || !std::isfinite(o.noise_sigma)) throw DomainError("synthesize: invalid noise sigma");
  if (o.count == 0) throw DomainError("synthesize: count must be positive");

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

  const double clip_hi = 4.0 * o.noise_sigma;
  const double clip_lo = std::max(-clip_hi, -0.49);
  std::vector<DrillRecord> out;
  out.reserve(o.count);
  const int width = static_cast<int>(std::to_string(o.count).size());
  for (std::size_t i = 0; i < o.count; ++i) {
    const double eps = std::clamp(o.noise_sigma * normal(rng), clip_lo, clip_hi);
    std::optional<DrillRecord> rec;
    for (int attempt = 0; attempt < 100000 && !rec; ++attempt) {
      const double len = uniform(o.length_min, o.length_max);
      const double rad = uniform(o.radius_min, o.radius_max);
      const double v_fill = uniform(o.v_fill_min, o.v_fill_max);
      const double v_drill = v_fill + kPi * len * (0.5 + eps);
      const TubeData tube(len, rad);
      if (v_drill <= drilled_volume_bound(v_fill, tube, Factor::perelman)) {
        std::string name = std::to_string(i + 1);
        name = "syn-" + std::string(static_cast<std::size_t>(width) - name.size(), '0') + name;
        rec = DrillRecord{std::move(name), VolumePair(v_fill, v_drill), tube};
      }
    }
    if (!rec) throw DomainError("synthesize: could not satisfy the drilling bound within the given ranges");
    out.push_back(std::move(*rec));
  }
  return out;
}

}  // namespace tubevol
