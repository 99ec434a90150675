#pragma once

// Scalar kernel: the Lobachevsky function, the ideal polyhedron constants built
// from it, and the closed-form tube/cusp quantities behind the drilling bound
//
//   V_drill <= C(R) * B,   B = V_fill + pi L sinh^2(R) sech(2R),
//
// with C = coth^3(2R) (Ricci-flow factor) or C = (coth R coth 2R)^{3/2}
// (the older smoothing factor).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tubevol/errors.hpp"

namespace tubevol {

inline constexpr double kPi = std::numbers::pi;

/// Length L and embedded tube radius R of a closed geodesic.
class TubeData {
 public:
  TubeData(double length, double radius) : length_(length), radius_(radius) {
    if (!std::isfinite(length) || !(length > 0.0))
      throw DomainError("geodesic length must be finite and positive, got " + std::to_string(length));
    if (!std::isfinite(radius) || !(radius > 0.0))
      throw DomainError("tube radius must be finite and positive, got " + std::to_string(radius));
  }

  double length() const { return length_; }
  double radius() const { return radius_; }

 private:
  double length_;
  double radius_;
};

/// Volumes of a closed manifold and of its complement of a geodesic.
/// Drilling strictly increases volume, so v_fill < v_drill is enforced.
class VolumePair {
 public:
  VolumePair(double v_fill, double v_drill) : v_fill_(v_fill), v_drill_(v_drill) {
    if (!std::isfinite(v_fill) || !(v_fill > 0.0))
      throw DomainError("filled volume must be finite and positive");
    if (!std::isfinite(v_drill) || !(v_drill > v_fill))
      throw DomainError("drilled volume must strictly exceed filled volume (drilling increases volume)");
  }

  double v_fill() const { return v_fill_; }
  double v_drill() const { return v_drill_; }
  double delta() const { return v_drill_ - v_fill_; }

 private:
  double v_fill_;
  double v_drill_;
};

/// Multiplicative factor used in the drilling estimate.
enum class Factor {
  perelman,  ///< coth^3(2R)
  old,       ///< (coth R coth 2R)^{3/2}
};

inline std::string_view to_string(Factor f) { return f == Factor::perelman ? "perelman" : "old"; }

inline Factor parse_factor(std::string_view s) {
  if (s == "perelman") return Factor::perelman;
  if (s == "old") return Factor::old;
  throw DomainError("unknown factor '" + std::string(s) + "' (expected perelman or old)");
}

namespace detail {

inline double coth(double x) { return 1.0 / std::tanh(x); }

inline void require_positive_radius(double r) {
  if (!std::isfinite(r) || !(r > 0.0))
    throw DomainError("tube radius must be finite and positive, got " + std::to_string(r));
}

// ln(sin t / t), smooth on [0, pi/2] with value 0 at t = 0.
inline double log_sinc(double t) {
  if (t == 0.0) return 0.0;
  return std::log(std::sin(t) / t);
}

// -int_0^theta ln(2 sin t) dt for theta in [0, pi/2].
inline double lobachevsky_reduced(double theta, double tol) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (theta == 0.0) return 0.0;
  // The adaptive stopping test uses |Kronrod - Gauss|, which bounds the Gauss error;
  // the Kronrod value returned is accurate to roughly that estimate^(3/2).
  const double est_tol = std::cbrt(tol * tol);
  // Near zero ln(2 sin t) = ln(2t) + ln(sin t / t); the first term integrates exactly.
  const double split = std::min(theta, 0.1);
  double integral = split * std::log(2.0 * split) - split;
  integral += Quad::integrate(log_sinc, 0.0, split, 20, est_tol);
  if (theta > split) {
    auto f = [](double t) { return std::log(2.0 * std::sin(t)); };
    integral += Quad::integrate(f, split, theta, 20, est_tol);
  }
  return -integral;
}

}  // namespace detail

/// Lobachevsky function L(theta) = -int_0^theta ln|2 sin t| dt.
///
/// Odd and pi-periodic; the argument is reduced to [0, pi/2] before integrating.
/// `tol` is the target relative error and must lie in [1e-15, 1e-6].
inline double lobachevsky(double theta, double tol = 1e-14) {
  if (!std::isfinite(theta)) throw DomainError("lobachevsky: argument must be finite");
  if (!(tol >= 1e-15) || tol > 1e-6) throw DomainError("lobachevsky: tolerance must lie in [1e-15, 1e-6]");
  double r = std::fmod(theta, kPi);
  if (r < 0.0) r += kPi;
  if (r > kPi / 2) return -detail::lobachevsky_reduced(kPi - r, tol);
  return detail::lobachevsky_reduced(r, tol);
}

/// Volumes of the regular ideal tetrahedron and octahedron.
struct Constants {
  double v3;
  double v8;
};

inline const Constants& constants() {
  static const Constants c{3.0 * lobachevsky(kPi / 3), 8.0 * lobachevsky(kPi / 4)};
  return c;
}

inline double v3() { return constants().v3; }
inline double v8() { return constants().v8; }

/// pi L sinh^2 R
inline double tube_volume(const TubeData& t) {
  const double s = std::sinh(t.radius());
  return kPi * t.length() * s * s;
}

/// pi L sinh 2R
inline double tube_boundary_area(const TubeData& t) {
  return kPi * t.length() * std::sinh(2.0 * t.radius());
}

/// Mean curvature coth(2R) of the boundary of a radius-R tube.
inline double mean_curvature(double radius) {
  detail::require_positive_radius(radius);
  return detail::coth(2.0 * radius);
}

/// Volume of the horocusp whose boundary matches the tube boundary after rescaling
/// its curvature to the tube's mean curvature: area / (2 kappa).
inline double horocusp_volume(const TubeData& t) {
  const double two_r = 2.0 * t.radius();
  return 0.5 * kPi * t.length() * std::sinh(two_r) * std::tanh(two_r);
}

/// pi L sinh^2(R) sech(2R), evaluated as (pi/2) L tanh R tanh 2R to stay finite for large R.
inline double tube_correction(const TubeData& t) {
  return 0.5 * kPi * t.length() * std::tanh(t.radius()) * std::tanh(2.0 * t.radius());
}

/// B = V_fill + pi L sinh^2(R) sech(2R).
inline double bound_base_B(double v_fill, const TubeData& t) {
  if (!std::isfinite(v_fill) || !(v_fill > 0.0)) throw DomainError("filled volume must be finite and positive");
  return v_fill + tube_correction(t);
}

/// C_O(R) = (coth R coth 2R)^{3/2}
inline double factor_co(double radius) {
  detail::require_positive_radius(radius);
  const double p = detail::coth(radius) * detail::coth(2.0 * radius);
  return p * std::sqrt(p);
}

/// C_P(R) = coth^3(2R)
inline double factor_cp(double radius) {
  detail::require_positive_radius(radius);
  const double k = detail::coth(2.0 * radius);
  return k * k * k;
}

inline double factor_value(Factor f, double radius) {
  return f == Factor::perelman ? factor_cp(radius) : factor_co(radius);
}

/// Upper bound C(R) * B for the volume of the drilled manifold.
inline double drilled_volume_bound(double v_fill, const TubeData& t, Factor f = Factor::perelman) {
  return factor_value(f, t.radius()) * bound_base_B(v_fill, t);
}

/// Relative overshoot (V_est - V_drill) / (V_drill - V_fill) of the coth^3(2R) estimate.
/// Negative when the pair violates the bound.
inline double overshoot_ratio(const VolumePair& p, const TubeData& t, Factor f = Factor::perelman) {
  const double increase = p.v_drill() - p.v_fill();
  if (!(increase > 0.0)) throw DomainError("overshoot ratio undefined: V_drill - V_fill must be positive");
  return (drilled_volume_bound(p.v_fill(), t, f) - p.v_drill()) / increase;
}

/// Lower bound on V_fill obtained by inverting the drilling bound.
/// Values <= 0 mean the bound is vacuous for these inputs.
inline double filled_volume_lower_bound(double v_drill, const TubeData& t, Factor f = Factor::perelman) {
  if (!std::isfinite(v_drill) || !(v_drill > 0.0)) throw DomainError("drilled volume must be finite and positive");
  return v_drill / factor_value(f, t.radius()) - tube_correction(t);
}

}  // namespace tubevol
