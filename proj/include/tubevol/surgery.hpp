#pragma once

// Volume change under hyperbolic Dehn filling. A filling that passes through cone
// manifolds with cone angle theta in [0, 2 pi] changes volume by
//
//   dV = V_drill - V_fill = 1/2 int_0^{2 pi} L(theta) dtheta,
//
// where L(theta) is the length of the cone locus. Profiles are sampled, not functional.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "tubevol/csv.hpp"
#include "tubevol/errors.hpp"
#include "tubevol/hypkernel.hpp"

namespace tubevol {

/// Samples (theta_i, L_i) of the cone-angle-to-length function, theta strictly
/// increasing from exactly 0 to exactly 2 pi, all L_i > 0. The theta = 0 sample stands
/// in for the drilled limit where the true length is 0; use a small positive value.
class ConeProfile {
 public:
  struct Sample {
    double theta;
    double length;
  };

  explicit ConeProfile(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) throw DomainError("cone profile needs at least 2 samples");
    if (samples_.front().theta != 0.0) throw DomainError("cone profile must start at theta = 0");
    if (samples_.back().theta != 2.0 * kPi) throw DomainError("cone profile must end at theta = 2 pi");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto& s = samples_[i];
      if (!std::isfinite(s.length) || !(s.length > 0.0))
        throw DomainError("cone profile lengths must be positive (sample " + std::to_string(i) + ")");
      if (i > 0 && !(s.theta > samples_[i - 1].theta))
        throw DomainError("cone profile angles must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }

  /// Uniform grid of `n` samples of `f` over [0, 2 pi].
  template <class F>
  static ConeProfile uniform(std::size_t n, F&& f) {
    if (n < 2) throw DomainError("cone profile needs at least 2 samples");
    std::vector<Sample> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = i + 1 == n ? 2.0 * kPi : 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1);
      s[i] = {theta, f(theta)};
    }
    return ConeProfile(std::move(s));
  }

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double final_length() const { return samples_.back().length; }

  double min_length() const {
    return std::min_element(samples_.begin(), samples_.end(),
                            [](const Sample& a, const Sample& b) { return a.length < b.length; })
        ->length;
  }
  double max_length() const {
    return std::max_element(samples_.begin(), samples_.end(),
                            [](const Sample& a, const Sample& b) { return a.length < b.length; })
        ->length;
  }

  bool is_uniform(double rel_tol = 1e-9) const {
    const double h = 2.0 * kPi / static_cast<double>(samples_.size() - 1);
    for (std::size_t i = 1; i < samples_.size(); ++i)
      if (std::abs((samples_[i].theta - samples_[i - 1].theta) - h) > rel_tol * h) return false;
    return true;
  }

 private:
  std::vector<Sample> samples_;
};

enum class Quadrature { trapezoid, simpson };

/// Half the composite quadrature of L over [0, 2 pi]. Simpson needs a uniform grid
/// with an odd number of samples.
inline double schlafli_delta_v(const ConeProfile& p, Quadrature method = Quadrature::trapezoid) {
  const auto& s = p.samples();
  double integral = 0.0;
  if (method == Quadrature::trapezoid) {
    for (std::size_t i = 1; i < s.size(); ++i)
      integral += 0.5 * (s[i].theta - s[i - 1].theta) * (s[i].length + s[i - 1].length);
  } else {
    if (s.size() % 2 == 0) throw DomainError("Simpson's rule needs an odd number of samples");
    if (!p.is_uniform()) throw DomainError("Simpson's rule needs uniformly spaced samples");
    const double h = 2.0 * kPi / static_cast<double>(s.size() - 1);
    double acc = s.front().length + s.back().length;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * s[i].length;
    integral = acc * h / 3.0;
  }
  return 0.5 * integral;
}

/// Small-length asymptotic pi L / 2 of the volume change.
inline double neumann_zagier_estimate(double length) {
  if (!std::isfinite(length) || !(length > 0.0)) throw DomainError("length must be finite and positive");
  return 0.5 * kPi * length;
}

struct BridgemanVerdict {
  bool monotone;     ///< L nondecreasing in theta
  bool bound_holds;  ///< delta_v <= pi_l
  double delta_v;
  double pi_l;  ///< pi times the length at cone angle 2 pi
};

/// Checks dV <= pi L(2 pi), which follows from the Schlafli integral whenever L is increasing.
inline BridgemanVerdict bridgeman_check(const ConeProfile& p, Quadrature method = Quadrature::trapezoid) {
  const auto& s = p.samples();
  BridgemanVerdict v{};
  v.monotone = std::adjacent_find(s.begin(), s.end(), [](const auto& a, const auto& b) {
                 return b.length < a.length;
               }) == s.end();
  v.delta_v = schlafli_delta_v(p, method);
  v.pi_l = kPi * p.final_length();
  v.bound_holds = v.delta_v <= v.pi_l;
  return v;
}

/// Hodgson-Kerckhoff regime L <= 0.16, R >= 0.66, in which the bound dV <= pi L is known.
inline bool hodgson_kerckhoff_regime(double length, double radius) {
  if (!(length > 0.0) || !(radius > 0.0)) throw DomainError("length and radius must be positive");
  return length <= 0.16 && radius >= 0.66;
}

/// Reads a two-column CSV with header `theta,length`; '#' lines are comments.
inline ConeProfile parse_cone_profile(std::istream& in) {
  csv::LineReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw InputError("cone profile: missing header");
  if (fields != std::vector<std::string>{"theta", "length"})
    throw InputError("cone profile line " + std::to_string(reader.line_number()) + ": expected header 'theta,length'");
  std::vector<ConeProfile::Sample> samples;
  while (reader.next(fields)) {
    const auto where = "cone profile line " + std::to_string(reader.line_number());
    if (fields.size() != 2) throw InputError(where + ": expected 2 fields, got " + std::to_string(fields.size()));
    samples.push_back({csv::parse_double(fields[0], where), csv::parse_double(fields[1], where)});
  }
  // 2 pi written to six or more significant digits snaps to the exact endpoint.
  if (!samples.empty() && std::abs(samples.back().theta - 2.0 * kPi) < 1e-5) samples.back().theta = 2.0 * kPi;
  try {
    return ConeProfile(std::move(samples));
  } catch (const DomainError& e) {
    throw InputError(std::string("cone profile: ") + e.what());
  }
}

inline ConeProfile load_cone_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open cone profile '" + path + "'");
  return parse_cone_profile(in);
}

}  // namespace tubevol
