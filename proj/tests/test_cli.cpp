#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = TUBEVOL_TEST_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "tubevol");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tubevol::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Value printed next to `key` in an aligned table.
std::string value_of(const std::string& table, const std::string& key) {
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k == key) {
      std::string rest;
      std::getline(ls >> std::ws, rest);
      return rest;
    }
  }
  return {};
}

double number_of(const std::string& table, const std::string& key) { return std::stod(value_of(table, key)); }

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& f) const { return (path_ / f).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(CliEstimate, HalfLogThreeRadius) {
  const auto r = run({"estimate", "2.02988", "1.0", "0.5493061443340549"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(number_of(r.out, "C_P"), 1.953125, 1e-11);
  EXPECT_NEAR(number_of(r.out, "C_O"), 3.95284707521, 1e-10);
  EXPECT_NEAR(number_of(r.out, "mean_curvature"), 1.25, 1e-11);
}

TEST(CliEstimate, RoundedRadiusFromTheExample) {
  const auto r = run({"estimate", "2.02988", "1.0", "0.5493"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(number_of(r.out, "C_P"), 1.953125, 1e-3);
}

TEST(CliEstimate, CsvAndFactorSelection) {
  const auto both = run({"estimate", "3", "0.8", "0.9", "--csv"});
  ASSERT_EQ(both.code, 0);
  EXPECT_EQ(both.out.rfind("quantity,value\n", 0), 0u);
  EXPECT_NE(both.out.find("V_est_old,"), std::string::npos);
  EXPECT_NE(both.out.find("V_est_perelman,"), std::string::npos);

  const auto old = run({"estimate", "3", "0.8", "0.9", "--factor", "old"});
  const auto per = run({"estimate", "3", "0.8", "0.9", "--factor", "perelman"});
  ASSERT_EQ(old.code, 0);
  ASSERT_EQ(per.code, 0);
  EXPECT_TRUE(value_of(old.out, "V_est_perelman").empty());
  EXPECT_TRUE(value_of(per.out, "V_est_old").empty());
  EXPECT_GE(number_of(old.out, "V_est_old"), number_of(per.out, "V_est_perelman"));
}

TEST(CliEstimate, Errors) {
  const auto zero = run({"estimate", "2", "1", "0"});
  EXPECT_EQ(zero.code, 2);
  EXPECT_NE(zero.err.find("domain error"), std::string::npos);
  EXPECT_EQ(run({"estimate", "2", "1", "abc"}).code, 1);
  EXPECT_EQ(run({"estimate", "2", "1"}).code, 1);
  EXPECT_EQ(run({"estimate", "2", "1", "1", "--factor", "new"}).code, 2);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliVerify, BundledFixturePasses) {
  TempDir dir("tubevol_cli_verify");
  const auto r = run({"verify", kData + "/sample_20.csv", "--report", dir / "report.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "records"), "20");
  EXPECT_EQ(value_of(r.out, "perelman_violations"), "0");
  const std::string report = read_file(dir / "report.csv");
  EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 21);
}

TEST(CliVerify, InjectedViolationFails) {
  TempDir dir("tubevol_cli_violation");
  std::string text = read_file(kData + "/sample_20.csv");
  text += "injected,1.0,40.0,1.0,1.0\n";
  write_file(dir / "bad.csv", text);
  const auto r = run({"verify", dir / "bad.csv"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(value_of(r.out, "perelman_violations"), "1");
  EXPECT_NE(r.err.find("verification failed"), std::string::npos);
}

TEST(CliVerify, InputErrors) {
  TempDir dir("tubevol_cli_input");
  write_file(dir / "empty.csv", "name,v_fill,v_drill,length,radius\n");
  EXPECT_EQ(run({"verify", dir / "empty.csv"}).code, 1);
  EXPECT_EQ(run({"verify", dir / "missing.csv"}).code, 1);

  write_file(dir / "garbled.csv", "name,v_fill,v_drill,length,radius\nm,1,2,x,1\n");
  const auto g = run({"verify", dir / "garbled.csv"});
  EXPECT_EQ(g.code, 1);
  EXPECT_NE(g.err.find("line 2"), std::string::npos);

  write_file(dir / "invalid.csv", "name,v_fill,v_drill,length,radius\nok,2,3,1,1\nbad,3,2,1,1\n");
  const auto inv = run({"verify", dir / "invalid.csv"});
  EXPECT_EQ(inv.code, 1);
  EXPECT_NE(inv.err.find("line 3"), std::string::npos);
  const auto skipped = run({"verify", dir / "invalid.csv", "--skip-invalid"});
  EXPECT_EQ(skipped.code, 0);
  EXPECT_EQ(value_of(skipped.out, "records"), "1");
  EXPECT_EQ(value_of(skipped.out, "rejected_rows"), "1");
}

TEST(CliVerify, ThreadsFromEnvironment) {
  TempDir dir("tubevol_cli_threads");
  ASSERT_EQ(run({"synthesize", "5000", "4", dir / "d.csv"}).code, 0);
  ::setenv("TUBEVOL_THREADS", "1", 1);
  const auto one = run({"verify", dir / "d.csv"});
  ::setenv("TUBEVOL_THREADS", "4", 1);
  const auto four = run({"verify", dir / "d.csv"});
  ::setenv("TUBEVOL_THREADS", "lots", 1);
  const auto bad = run({"verify", dir / "d.csv"});
  ::unsetenv("TUBEVOL_THREADS");
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(bad.code, 1);
}

TEST(CliFigures, WritesFiveSeries) {
  TempDir dir("tubevol_cli_figures");
  const auto r = run({"figures", kData + "/sample_20.csv", dir / "out"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name :
       {"fig_ratio_curve", "fig_overshoot", "fig_overshoot_zoom", "fig_b_over_vdrill", "fig_dv_over_pil"}) {
    EXPECT_TRUE(fs::exists(dir / (std::string("out/") + name + ".csv"))) << name;
    EXPECT_TRUE(fs::exists(dir / (std::string("out/") + name + ".svg"))) << name;
  }
  const auto csv_only = run({"figures", kData + "/sample_20.csv", dir / "csv", "--no-svg", "--points", "64"});
  ASSERT_EQ(csv_only.code, 0);
  EXPECT_FALSE(fs::exists(dir / "csv/fig_overshoot.svg"));
  const std::string curve = read_file(dir / "csv/fig_ratio_curve.csv");
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 65);
}

TEST(CliFigures, UnwritableDirectory) {
  TempDir dir("tubevol_cli_unwritable");
  write_file(dir / "blocker", "x");
  EXPECT_EQ(run({"figures", kData + "/sample_20.csv", dir / "blocker/sub"}).code, 1);
}

TEST(CliTubeRadius, Fixtures) {
  const auto two = run({"tube-radius", kData + "/two_generator.txt", "--max-word-length", "1"});
  ASSERT_EQ(two.code, 0) << two.err;
  EXPECT_NEAR(number_of(two.out, "radius_upper_bound"), 0.5 * std::log(2.0), 1e-11);
  EXPECT_EQ(value_of(two.out, "witness"), "b");
  EXPECT_NE(value_of(two.out, "complex_length").find("1.38629436112"), std::string::npos);

  const auto one = run({"tube-radius", kData + "/single_generator.txt"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(value_of(one.out, "radius_upper_bound"), "infinite (no distinct lift found)");

  // Longer words reach a lift crossing the axis: b a b^-1 sends (0, inf) to (-9/5, 35/9).
  const auto crossing = run({"tube-radius", kData + "/two_generator.txt", "--max-word-length", "3"});
  ASSERT_EQ(crossing.code, 0);
  EXPECT_EQ(number_of(crossing.out, "radius_upper_bound"), 0.0);

  double prev = INFINITY;
  for (int len = 1; len <= 5; ++len) {
    const auto r = run({"tube-radius", kData + "/two_generator.txt", "--max-word-length", std::to_string(len)});
    ASSERT_EQ(r.code, 0);
    const double rad = number_of(r.out, "radius_upper_bound");
    EXPECT_LE(rad, prev);
    prev = rad;
  }

  // The discrete fixture keeps the length-one answer under longer searches.
  const auto schottky = run({"tube-radius", kData + "/half_turn_schottky.txt", "--max-word-length", "8"});
  ASSERT_EQ(schottky.code, 0);
  EXPECT_NEAR(number_of(schottky.out, "radius_upper_bound"), 0.5 * std::log(2.0), 1e-11);
  EXPECT_EQ(value_of(schottky.out, "witness"), "b");
}

TEST(CliTubeRadius, Errors) {
  TempDir dir("tubevol_cli_tube");
  write_file(dir / "parabolic.txt", "1 0 1 0 0 0 1 0\ncore: a\n");
  EXPECT_EQ(run({"tube-radius", dir / "parabolic.txt"}).code, 2);
  write_file(dir / "short.txt", "1 0 1 0\ncore: a\n");
  EXPECT_EQ(run({"tube-radius", dir / "short.txt"}).code, 1);
  EXPECT_EQ(run({"tube-radius", dir / "none.txt"}).code, 1);
}

TEST(CliSurgery, Profiles) {
  const double pi = tubevol::kPi;
  const auto c = run({"surgery", kData + "/profile_constant.csv"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NEAR(number_of(c.out, "delta_v_trapezoid"), pi * 0.8, 1e-11);
  EXPECT_NEAR(number_of(c.out, "delta_v_simpson"), pi * 0.8, 1e-11);
  EXPECT_EQ(value_of(c.out, "bridgeman_holds"), "true");

  const auto ramp = run({"surgery", kData + "/profile_ramp.csv", "--radius", "0.7"});
  ASSERT_EQ(ramp.code, 0);
  EXPECT_NEAR(number_of(ramp.out, "delta_v_trapezoid"), number_of(ramp.out, "nz_estimate"), 1e-11);
  EXPECT_EQ(value_of(ramp.out, "hk_regime"), "false");

  const auto bad = run({"surgery", kData + "/profile_nonmonotone.csv"});
  ASSERT_EQ(bad.code, 0);
  EXPECT_EQ(value_of(bad.out, "monotone"), "false");
  EXPECT_EQ(value_of(bad.out, "bridgeman_holds"), "false");
  EXPECT_NEAR(number_of(bad.out, "delta_v_simpson"), 8.0 * pi / 3.0, 1e-11);

  TempDir dir("tubevol_cli_surgery");
  write_file(dir / "even.csv", "theta,length\n0,1\n2,1\n4,1\n6.283185307179586,1\n");
  const auto even = run({"surgery", dir / "even.csv"});
  ASSERT_EQ(even.code, 0);
  EXPECT_NE(value_of(even.out, "delta_v_simpson").find("n/a"), std::string::npos);
  write_file(dir / "bad.csv", "theta,length\n0,1\n1,nope\n");
  EXPECT_EQ(run({"surgery", dir / "bad.csv"}).code, 1);
}

TEST(CliSynthesize, DeterministicRoundTrip) {
  TempDir dir("tubevol_cli_synth");
  ASSERT_EQ(run({"synthesize", "200", "11", dir / "a.csv"}).code, 0);
  ASSERT_EQ(run({"synthesize", "200", "11", dir / "b.csv"}).code, 0);
  EXPECT_EQ(read_file(dir / "a.csv"), read_file(dir / "b.csv"));
  const auto stdout_copy = run({"synthesize", "200", "11", "-"});
  EXPECT_EQ(stdout_copy.out, read_file(dir / "a.csv"));
  EXPECT_NE(run({"synthesize", "200", "12", "-"}).out, stdout_copy.out);

  // Rewriting what was read reproduces the file byte for byte.
  const auto in = tubevol::ingest(dir / "a.csv");
  std::ostringstream again;
  tubevol::write_dataset(again, in.records);
  EXPECT_EQ(again.str(), read_file(dir / "a.csv"));

  const auto zero = run({"synthesize", "100", "3", dir / "z.csv", "--noise", "0"});
  ASSERT_EQ(zero.code, 0);
  for (const auto& rep : tubevol::evaluate(tubevol::ingest(dir / "z.csv").records))
    EXPECT_NEAR(rep.dv_over_pi_l, 0.5, 1e-12);

  EXPECT_EQ(run({"synthesize", "10", "1", dir / "nodir/x.csv"}).code, 1);
  EXPECT_EQ(run({"synthesize", "10", "1", "-", "--l-min", "0"}).code, 2);
}

TEST(CliBounds, Values) {
  const auto r = run({"bounds", "--chi", "-1", "--gromov-norm", "8", "--twist", "6", "--haken-norm", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(number_of(r.out, "V3"), 1.01494160641, 1e-11);
  EXPECT_NEAR(number_of(r.out, "V8"), 3.66386237671, 1e-11);
  EXPECT_NEAR(number_of(r.out, "miyamoto_lower_bound"), 3.66386237671, 1e-11);
  EXPECT_NEAR(number_of(r.out, "guts_lower_bound"), 4.05976642564, 1e-11);
  EXPECT_NEAR(number_of(r.out, "alternating_lower"), 7.32772475342, 1e-11);
  EXPECT_NEAR(number_of(r.out, "haken_double_bound"), 1.01494160641, 1e-11);
  const auto scan = run({"bounds", "--scan-volume", "2.0298832128193"});
  EXPECT_NEAR(number_of(scan.out, "min_volume_scan"), 0.670037404461, 1e-9);
  EXPECT_EQ(run({"bounds", "--chi", "2"}).code, 2);
  EXPECT_EQ(run({"bounds", "--gromov-norm", "3"}).code, 2);
}

TEST(CliConfig, FileSuppliesOptionsAndFlagsOverride) {
  TempDir dir("tubevol_cli_config");
  write_file(dir / "run.toml", "[estimate]\nfactor = \"old\"\ncsv = true\n");
  const auto r = run({"--config", dir / "run.toml", "estimate", "3", "0.8", "0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("V_est_old,"), std::string::npos);
  EXPECT_EQ(r.out.find("V_est_perelman"), std::string::npos);
  const auto over = run({"--config", dir / "run.toml", "estimate", "3", "0.8", "0.9", "--factor", "perelman"});
  ASSERT_EQ(over.code, 0);
  EXPECT_NE(over.out.find("V_est_perelman,"), std::string::npos);
  EXPECT_EQ(over.out.find("V_est_old"), std::string::npos);
  EXPECT_EQ(run({"--config", dir / "absent.toml", "estimate", "3", "0.8", "0.9"}).code, 1);
}
