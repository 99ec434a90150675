#pragma once

// Command-line front end. `run` is separate from main() so tests can drive it
// in-process with captured streams.
//
// Exit codes: 0 success, 1 input error, 2 domain error, 3 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tubevol/tubevol.hpp"

namespace tubevol::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kDomainError = 2, kVerificationFailed = 3 };

/// Worker threads from TUBEVOL_THREADS (unset or 0 = hardware concurrency).
inline unsigned threads_from_env() {
  const char* v = std::getenv("TUBEVOL_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw InputError(std::string("TUBEVOL_THREADS must be a nonnegative integer, got '") + v + "'");
  return static_cast<unsigned>(n);
}

namespace detail {

// Two-column quantity table, aligned for terminals or comma-separated.
class Table {
 public:
  explicit Table(bool csv) : csv_(csv) {}

  void add(std::string key, double value) { rows_.emplace_back(std::move(key), csv::format_sig(value)); }
  void add(std::string key, std::string value) { rows_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, bool value) { rows_.emplace_back(std::move(key), csv::format_bool(value)); }
  void add(std::string key, std::size_t value) { rows_.emplace_back(std::move(key), std::to_string(value)); }

  void print(std::ostream& out) const {
    if (csv_) {
      out << "quantity,value\n";
      for (const auto& [k, v] : rows_) out << k << ',' << v << '\n';
      return;
    }
    std::size_t w = 0;
    for (const auto& r : rows_) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows_) out << std::left << std::setw(static_cast<int>(w + 2)) << k << v << '\n';
  }

 private:
  bool csv_;
  std::vector<std::pair<std::string, std::string>> rows_;
};

inline std::string format_complex(Complex z) {
  return csv::format_sig(z.real()) + (z.imag() < 0 ? " - " : " + ") + csv::format_sig(std::abs(z.imag())) + "i";
}

}  // namespace detail

struct EstimateArgs {
  double v_fill = 0, length = 0, radius = 0;
  std::string factor = "both";
  bool csv = false;
};

inline int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const TubeData t(a.length, a.radius);
  if (a.factor != "both") parse_factor(a.factor);
  detail::Table tab(a.csv);
  tab.add("B", bound_base_B(a.v_fill, t));
  tab.add("C_O", factor_co(a.radius));
  tab.add("C_P", factor_cp(a.radius));
  if (a.factor != "perelman") tab.add("V_est_old", drilled_volume_bound(a.v_fill, t, Factor::old));
  if (a.factor != "old") tab.add("V_est_perelman", drilled_volume_bound(a.v_fill, t, Factor::perelman));
  tab.add("tube_volume", tube_volume(t));
  tab.add("tube_boundary_area", tube_boundary_area(t));
  tab.add("mean_curvature", mean_curvature(a.radius));
  tab.add("horocusp_volume", horocusp_volume(t));
  tab.print(out);
  return kOk;
}

struct VerifyArgs {
  std::string dataset;
  std::string report;
  std::size_t bins = 40;
  bool skip_invalid = false;
};

inline void print_rejections(const IngestResult& in, std::ostream& err) {
  for (const auto& r : in.rejected) err << "line " << r.line << ": rejected: " << r.message << '\n';
}

inline int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const IngestResult in = ingest(a.dataset);
  print_rejections(in, err);
  if (!in.rejected.empty() && !a.skip_invalid) {
    err << in.rejected.size() << " invalid row(s); rerun with --skip-invalid to ignore them\n";
    return kInputError;
  }
  if (in.records.empty()) {
    err << "dataset '" << a.dataset << "' has no records\n";
    return kInputError;
  }
  const auto reports = evaluate(in.records, threads_from_env());
  const DatasetStats s = statistics(reports, a.bins);
  if (!a.report.empty()) {
    std::ofstream f(a.report);
    if (!f) throw InputError("cannot write report '" + a.report + "'");
    write_report(f, reports);
  }
  detail::Table tab(false);
  tab.add("records", s.count);
  tab.add("rejected_rows", in.rejected.size());
  tab.add("perelman_violations", s.violations.perelman);
  tab.add("old_violations", s.violations.old);
  tab.add("bridgeman_violations", s.violations.bridgeman);
  tab.add("b_gt_vdrill_warnings", s.violations.b_le_vdrill);
  tab.add("hk_regime_records", s.hk_regime);
  tab.add("mean_dv_over_pi_l", s.mean_dv_over_pi_l);
  tab.add("stddev_dv_over_pi_l", s.stddev_dv_over_pi_l);
  tab.add("length_min", s.length_min);
  tab.add("length_max", s.length_max);
  tab.add("radius_min", s.radius_min);
  tab.add("radius_max", s.radius_max);
  tab.print(out);
  if (s.violations.b_le_vdrill > 0)
    err << "warning: " << s.violations.b_le_vdrill << " record(s) have B > V_drill\n";
  if (s.violations.perelman > 0) {
    err << "verification failed: " << s.violations.perelman << " record(s) violate V_drill <= C_P B\n";
    return kVerificationFailed;
  }
  return kOk;
}

struct FiguresArgs {
  std::string dataset;
  std::string out_dir;
  FigureOptions options;
  bool no_svg = false;
};

inline int cmd_figures(const FiguresArgs& a, std::ostream& out, std::ostream& err) {
  const IngestResult in = ingest(a.dataset);
  print_rejections(in, err);
  if (!in.rejected.empty()) return kInputError;
  if (in.records.empty()) {
    err << "dataset '" << a.dataset << "' has no records\n";
    return kInputError;
  }
  const auto series = figure_series(evaluate(in.records, threads_from_env()), a.options);
  for (const auto& p : write_figures(series, a.out_dir, !a.no_svg)) out << p.string() << '\n';
  return kOk;
}

struct TubeRadiusArgs {
  std::string presentation;
  int max_word_length = 4;
};

inline int cmd_tube_radius(const TubeRadiusArgs& a, std::ostream& out) {
  const GroupPresentation g = load_presentation(a.presentation);
  const TubeRadiusResult r = tube_radius_upper_bound(g, a.max_word_length);
  detail::Table tab(false);
  tab.add("core_word", g.core_word);
  tab.add("complex_length", detail::format_complex(r.core_length));
  tab.add("radius_upper_bound", r.found() ? csv::format_sig(r.radius) : std::string("infinite (no distinct lift found)"));
  tab.add("witness", r.found() ? r.witness : std::string("-"));
  tab.add("words_examined", r.words_examined);
  if (r.words_unresolved > 0) tab.add("words_unresolved", r.words_unresolved);
  tab.print(out);
  return kOk;
}

struct SurgeryArgs {
  std::string profile;
  std::optional<double> radius;
};

inline int cmd_surgery(const SurgeryArgs& a, std::ostream& out) {
  const ConeProfile p = load_cone_profile(a.profile);
  const BridgemanVerdict v = bridgeman_check(p);
  detail::Table tab(false);
  tab.add("samples", p.size());
  tab.add("delta_v_trapezoid", v.delta_v);
  try {
    tab.add("delta_v_simpson", schlafli_delta_v(p, Quadrature::simpson));
  } catch (const DomainError&) {
    tab.add("delta_v_simpson", std::string("n/a (needs a uniform grid with an odd sample count)"));
  }
  tab.add("final_length", p.final_length());
  tab.add("nz_estimate", neumann_zagier_estimate(p.final_length()));
  tab.add("dv_over_pi_l", v.delta_v / v.pi_l);
  tab.add("monotone", v.monotone);
  tab.add("bridgeman_holds", v.bound_holds);
  if (a.radius) tab.add("hk_regime", hodgson_kerckhoff_regime(p.final_length(), *a.radius));
  tab.print(out);
  return kOk;
}

struct SynthesizeArgs {
  SynthesisOptions options;
  std::string out_path;
};

inline int cmd_synthesize(const SynthesizeArgs& a, std::ostream& out) {
  const auto records = synthesize(a.options);
  if (a.out_path == "-") {
    write_dataset(out, records);
    return kOk;
  }
  std::ofstream f(a.out_path);
  if (!f) throw InputError("cannot write dataset '" + a.out_path + "'");
  write_dataset(f, records);
  if (!f) throw InputError("error writing dataset '" + a.out_path + "'");
  return kOk;
}

struct BoundsArgs {
  std::optional<long> chi;
  std::optional<double> gromov_norm;
  std::optional<long> twist;
  std::optional<double> haken_norm;
  std::optional<double> scan_volume;
  double scan_radius = 0.5 * std::log(3.0);
  double scan_max_length = 0.5877;
  long scan_steps = 10000;
};

inline int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  detail::Table tab(false);
  tab.add("V3", v3());
  tab.add("V8", v8());
  if (a.chi) {
    const GutsBound g = guts_bound_tiers(GutsData(*a.chi, a.gromov_norm));
    tab.add("miyamoto_lower_bound", g.from_chi);
    if (a.gromov_norm) tab.add("norm_lower_bound", g.from_norm);
    tab.add("guts_lower_bound", g.best);
  } else if (a.gromov_norm) {
    throw DomainError("--gromov-norm needs --chi for the guts bound");
  }
  if (a.twist) {
    const VolumeWindow w = alternating_volume_window(AlternatingDiagram(*a.twist));
    tab.add("alternating_lower", w.lower);
    tab.add("alternating_upper", w.upper);
  }
  if (a.haken_norm) tab.add("haken_double_bound", haken_double_bound(*a.haken_norm));
  if (a.scan_volume)
    tab.add("min_volume_scan", min_volume_scan(*a.scan_volume, a.scan_radius, a.scan_max_length, a.scan_steps));
  tab.print(out);
  return kOk;
}

/// Parses argv and dispatches. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volume bounds for drilling and filling closed geodesics in hyperbolic 3-manifolds", "tubevol"};
  app.set_config("--config", "", "key = value file; subcommand options go under [subcommand] sections");
  app.require_subcommand(1);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Drilling bound and tube quantities for one geodesic");
  c_est->add_option("v_fill", est.v_fill, "volume of the closed manifold")->required();
  c_est->add_option("length", est.length, "length L of the geodesic")->required();
  c_est->add_option("radius", est.radius, "tube radius R")->required();
  c_est->add_option("--factor", est.factor, "both, perelman or old")->capture_default_str();
  c_est->add_flag("--csv", est.csv, "comma-separated output");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Check every record of a dataset against the drilling bounds");
  c_ver->add_option("dataset", ver.dataset, "CSV with header name,v_fill,v_drill,length,radius")->required();
  c_ver->add_option("--report", ver.report, "write the per-record report CSV here");
  c_ver->add_option("--bins", ver.bins, "histogram bins")->capture_default_str();
  c_ver->add_flag("--skip-invalid", ver.skip_invalid, "ignore rows that fail validation instead of aborting");

  FiguresArgs fig;
  auto* c_fig = app.add_subcommand("figures", "Write the figure series (CSV and SVG) for a dataset");
  c_fig->add_option("dataset", fig.dataset)->required();
  c_fig->add_option("out_dir", fig.out_dir)->required();
  c_fig->add_option("--r-min", fig.options.curve_r_min, "curve sampling start")->capture_default_str();
  c_fig->add_option("--r-max", fig.options.curve_r_max, "curve sampling end")->capture_default_str();
  c_fig->add_option("--points", fig.options.curve_points, "curve sample count")->capture_default_str();
  c_fig->add_option("--bins", fig.options.bins, "histogram bins")->capture_default_str();
  c_fig->add_option("--zoom-min-r", fig.options.zoom_min_r, "smallest R in the zoomed overshoot plot")
      ->capture_default_str();
  c_fig->add_flag("--no-svg", fig.no_svg, "CSV only");

  TubeRadiusArgs tr;
  auto* c_tr = app.add_subcommand("tube-radius", "Upper bound for the tube radius about a core geodesic");
  c_tr->add_option("presentation", tr.presentation, "generator file")->required();
  c_tr->add_option("--max-word-length", tr.max_word_length, "longest word enumerated")->capture_default_str();

  SurgeryArgs sur;
  auto* c_sur = app.add_subcommand("surgery", "Volume change from a cone-angle length profile");
  c_sur->add_option("profile", sur.profile, "CSV with header theta,length")->required();
  c_sur->add_option("--radius", sur.radius, "tube radius, for the Hodgson-Kerckhoff regime check");

  SynthesizeArgs syn;
  auto* c_syn = app.add_subcommand("synthesize", "Write a synthetic dataset");
  c_syn->add_option("n", syn.options.count, "number of records")->required();
  c_syn->add_option("seed", syn.options.seed, "random seed")->required();
  c_syn->add_option("out", syn.out_path, "output path, '-' for stdout")->required();
  c_syn->add_option("--noise", syn.options.noise_sigma, "sigma of dV/(pi L) around 1/2")->capture_default_str();
  c_syn->add_option("--l-min", syn.options.length_min)->capture_default_str();
  c_syn->add_option("--l-max", syn.options.length_max)->capture_default_str();
  c_syn->add_option("--r-min", syn.options.radius_min)->capture_default_str();
  c_syn->add_option("--r-max", syn.options.radius_max)->capture_default_str();

  BoundsArgs bnd;
  auto* c_bnd = app.add_subcommand("bounds", "Topological volume bounds and the constants V3, V8");
  c_bnd->add_option("--chi", bnd.chi, "Euler characteristic of the guts");
  c_bnd->add_option("--gromov-norm", bnd.gromov_norm, "Gromov norm of the doubled guts");
  c_bnd->add_option("--twist", bnd.twist, "twist number of a prime alternating diagram");
  c_bnd->add_option("--haken-norm", bnd.haken_norm, "Gromov norm of the double DX");
  c_bnd->add_option("--scan-volume", bnd.scan_volume, "drilled volume for the minimum-volume scan");
  c_bnd->add_option("--scan-radius", bnd.scan_radius)->capture_default_str();
  c_bnd->add_option("--scan-max-length", bnd.scan_max_length)->capture_default_str();
  c_bnd->add_option("--scan-steps", bnd.scan_steps)->capture_default_str();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? kOk : kInputError;
    }
    if (c_est->parsed()) return cmd_estimate(est, out);
    if (c_ver->parsed()) return cmd_verify(ver, out, err);
    if (c_fig->parsed()) return cmd_figures(fig, out, err);
    if (c_tr->parsed()) return cmd_tube_radius(tr, out);
    if (c_sur->parsed()) return cmd_surgery(sur, out);
    if (c_syn->parsed()) return cmd_synthesize(syn, out);
    if (c_bnd->parsed()) return cmd_bounds(bnd, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace tubevol::cli
