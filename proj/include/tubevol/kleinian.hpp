#pragma once

// Isometries of the upper half-space model of H^3 as normalized SL(2,C)
// matrices, geodesic lines given by their ideal endpoints, and the search for
// the tube radius of a closed geodesic: half the distance from the axis of a
// loxodromic element to its nearest translate under the group.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tubevol/errors.hpp"

namespace tubevol {

using Complex = std::complex<double>;

/// A point of the extended complex plane (the sphere at infinity of H^3).
struct IdealPoint {
  Complex z{};
  bool infinite = false;

  static IdealPoint at_infinity() { return {Complex{}, true}; }
  static IdealPoint finite(Complex w) { return {w, false}; }

  bool approx_equal(const IdealPoint& o, double tol = 1e-12) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    return std::abs(z - o.z) <= tol * std::max({1.0, std::abs(z), std::abs(o.z)});
  }
};

/// A point of H^3 in upper half-space coordinates: horizontal w, height t > 0.
struct SpacePoint {
  Complex w{};
  double height = 1.0;
};

/// Hyperbolic distance between two points of upper half-space.
inline double point_distance(const SpacePoint& p1, const SpacePoint& p2) {
  if (!(p1.height > 0.0) || !(p2.height > 0.0)) throw DomainError("point_distance: heights must be positive");
  const double dt = p1.height - p2.height;
  const double num = std::norm(p1.w - p2.w) + dt * dt;
  return std::acosh(1.0 + num / (2.0 * p1.height * p2.height));
}

/// Element of SL(2,C), always stored with determinant 1.
class MobiusTransform {
 public:
  MobiusTransform() = default;

  /// Divides by a square root of the determinant; throws if the matrix is singular or not finite.
  MobiusTransform(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
    for (const Complex& e : {a, b, c, d})
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
        throw DomainError("Mobius transformation entries must be finite");
    const Complex det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw DomainError("Mobius transformation is singular");
    const Complex s = std::sqrt(det);
    a_ /= s;
    b_ /= s;
    c_ /= s;
    d_ /= s;
  }

  static MobiusTransform identity() { return {}; }

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  Complex d() const { return d_; }

  Complex trace() const { return a_ + d_; }
  Complex determinant() const { return a_ * d_ - b_ * c_; }
  bool is_normalized(double tol = 1e-10) const { return std::abs(determinant() - 1.0) < tol; }

  MobiusTransform inverse() const { return raw(d_, -b_, -c_, a_); }

  friend MobiusTransform operator*(const MobiusTransform& x, const MobiusTransform& y) {
    return raw(x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
               x.c_ * y.b_ + x.d_ * y.d_);
  }

  IdealPoint apply(const IdealPoint& p) const {
    if (p.infinite) {
      if (c_ == Complex{}) return IdealPoint::at_infinity();
      return IdealPoint::finite(a_ / c_);
    }
    const Complex den = c_ * p.z + d_;
    if (den == Complex{}) return IdealPoint::at_infinity();
    return IdealPoint::finite((a_ * p.z + b_) / den);
  }

  /// Action on H^3 through the quaternion model w + t j.
  SpacePoint apply(const SpacePoint& p) const {
    const Complex cw_d = c_ * p.w + d_;
    const double t2 = p.height * p.height;
    const double den = std::norm(cw_d) + std::norm(c_) * t2;
    const Complex w = ((a_ * p.w + b_) * std::conj(cw_d) + a_ * std::conj(c_) * t2) / den;
    return {w, p.height / den};
  }

 private:
  static MobiusTransform raw(Complex a, Complex b, Complex c, Complex d) {
    MobiusTransform m;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    return m;
  }

  Complex a_{1.0};
  Complex b_{0.0};
  Complex c_{0.0};
  Complex d_{1.0};
};

enum class MobiusKind { identity, parabolic, elliptic, loxodromic };

inline const char* to_string(MobiusKind k) {
  switch (k) {
    case MobiusKind::identity: return "identity";
    case MobiusKind::parabolic: return "parabolic";
    case MobiusKind::elliptic: return "elliptic";
    case MobiusKind::loxodromic: return "loxodromic";
  }
  return "?";
}

/// Classification by trace, tolerance `tol`.
inline MobiusKind classify(const MobiusTransform& m, double tol = 1e-9) {
  if (!m.is_normalized()) throw DomainError("classify: transformation is not normalized");
  const Complex tr = m.trace();
  if (std::abs(tr * tr - 4.0) < tol) {
    if (std::abs(m.b()) < tol && std::abs(m.c()) < tol && std::abs(m.a() - m.d()) < tol)
      return MobiusKind::identity;
    return MobiusKind::parabolic;
  }
  if (std::abs(tr.imag()) < tol && std::abs(tr.real()) < 2.0) return MobiusKind::elliptic;
  return MobiusKind::loxodromic;
}

namespace detail {

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double phi) {
  constexpr double pi = 3.14159265358979323846;
  double r = std::remainder(phi, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

inline void require_loxodromic(const MobiusTransform& m, const char* what) {
  const MobiusKind k = classify(m);
  if (k != MobiusKind::loxodromic)
    throw ClassificationError(std::string(what) + ": expected a loxodromic element, got " + to_string(k));
}

}  // namespace detail

/// Complex translation length l + i theta with l > 0 and theta in (-pi, pi];
/// 2 cosh(lambda / 2) equals the trace up to sign.
inline Complex complex_length(const MobiusTransform& m) {
  detail::require_loxodromic(m, "complex_length");
  Complex lambda = 2.0 * std::acosh(m.trace() / 2.0);
  if (lambda.real() < 0.0) lambda = -lambda;
  return {lambda.real(), detail::wrap_angle(lambda.imag())};
}

/// Unordered pair of distinct ideal points. Canonical form: a point at infinity is
/// stored second, otherwise the endpoints are ordered by (real, imag).
class GeodesicLine {
 public:
  GeodesicLine(IdealPoint p, IdealPoint q) : p_(p), q_(q) {
    if (p.infinite && q.infinite) throw DomainError("geodesic endpoints must be distinct");
    if (!p.infinite && !q.infinite && p.z == q.z) throw DomainError("geodesic endpoints must be distinct");
    if (p_.infinite) std::swap(p_, q_);
    if (!q_.infinite &&
        std::make_pair(q_.z.real(), q_.z.imag()) < std::make_pair(p_.z.real(), p_.z.imag()))
      std::swap(p_, q_);
  }

  GeodesicLine(Complex p, Complex q) : GeodesicLine(IdealPoint::finite(p), IdealPoint::finite(q)) {}

  /// Vertical line over `p`.
  static GeodesicLine vertical(Complex p) { return {IdealPoint::finite(p), IdealPoint::at_infinity()}; }

  const IdealPoint& p() const { return p_; }
  const IdealPoint& q() const { return q_; }

  /// Transformation taking the standard line (0, inf) to this one, with 0 -> p and inf -> q.
  MobiusTransform standard_frame() const {
    if (q_.infinite) return {1.0, p_.z, 0.0, 1.0};
    return {q_.z, p_.z, 1.0, 1.0};
  }

  /// Point at signed arclength s from the base point of `standard_frame`
  /// (the apex of the semicircle, or height 1 on a vertical line).
  SpacePoint at(double s) const { return standard_frame().apply(SpacePoint{Complex{}, std::exp(s)}); }

  bool approx_equal(const GeodesicLine& o, double tol = 1e-12) const {
    return (p_.approx_equal(o.p_, tol) && q_.approx_equal(o.q_, tol)) ||
           (p_.approx_equal(o.q_, tol) && q_.approx_equal(o.p_, tol));
  }

 private:
  IdealPoint p_;
  IdealPoint q_;
};

inline GeodesicLine apply(const MobiusTransform& m, const GeodesicLine& g) {
  return {m.apply(g.p()), m.apply(g.q())};
}

/// Fixed points of a loxodromic element.
inline GeodesicLine axis(const MobiusTransform& m) {
  detail::require_loxodromic(m, "axis");
  const Complex a = m.a(), b = m.b(), c = m.c(), d = m.d();
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (std::abs(c) <= 1e-15 * scale) return GeodesicLine::vertical(b / (d - a));
  // Roots of c z^2 + (d - a) z - b = 0; take the larger numerator first, then Vieta.
  const Complex disc = std::sqrt(m.trace() * m.trace() - 4.0);
  const Complex n_plus = (a - d) + disc;
  const Complex n_minus = (a - d) - disc;
  const Complex num = std::abs(n_plus) >= std::abs(n_minus) ? n_plus : n_minus;
  const Complex z1 = num / (2.0 * c);
  const Complex z2 = -b / (c * z1);
  return {z1, z2};
}

/// Complex distance between two geodesic lines along their common perpendicular.
///
/// `distance` is the minimal hyperbolic distance (0 when the lines meet or share an
/// ideal endpoint). `angle` is the rotation between the lines measured along the
/// perpendicular, in (-pi, pi]; lines carry no orientation, so it is only defined
/// up to adding pi and serves diagnostics only.
struct ComplexDistance {
  enum class Relation { disjoint, intersecting, asymptotic, same };

  double distance = 0.0;
  double angle = 0.0;
  Relation relation = Relation::disjoint;
};

namespace detail {

// Image of `x` under the map sending g.p() -> 0 and g.q() -> inf.
inline IdealPoint to_standard(const GeodesicLine& g, const IdealPoint& x) {
  const IdealPoint& p = g.p();
  const IdealPoint& q = g.q();
  if (q.infinite) {
    if (x.infinite) return IdealPoint::at_infinity();
    return IdealPoint::finite(x.z - p.z);
  }
  if (x.infinite) return IdealPoint::finite(1.0);
  const Complex den = x.z - q.z;
  if (den == Complex{}) return IdealPoint::at_infinity();
  return IdealPoint::finite((x.z - p.z) / den);
}

enum class EndKind { zero, infinity, generic };

inline EndKind end_kind(const IdealPoint& x, double tol) {
  if (x.infinite || std::abs(x.z) > 1.0 / tol) return EndKind::infinity;
  if (std::abs(x.z) < tol) return EndKind::zero;
  return EndKind::generic;
}

}  // namespace detail

/// Complex distance, computed by moving `g1` to the line (0, inf). If `g2` then has
/// endpoints u, v, the distance delta satisfies tanh^2(delta/2) = u/v.
///
/// When u/v is within `tol` of 0 or infinity, the lines count as sharing an endpoint
/// if |u| or |v| is below `tol` or above 1/`tol` in that frame.
inline ComplexDistance line_distance(const GeodesicLine& g1, const GeodesicLine& g2, double tol = 1e-12) {
  using Relation = ComplexDistance::Relation;
  const IdealPoint u = detail::to_standard(g1, g2.p());
  const IdealPoint v = detail::to_standard(g1, g2.q());
  const auto ku = detail::end_kind(u, tol);
  const auto kv = detail::end_kind(v, tol);
  using detail::EndKind;
  // A generic ratio u/v decides the distance however far along g1 the endpoints sit.
  bool generic_ratio = false;
  if (!u.infinite && !v.infinite && v.z != Complex{}) {
    const double r = std::abs(u.z / v.z);
    generic_ratio = r > tol && r < 1.0 / tol;
  }
  if (!generic_ratio) {
    if ((ku == EndKind::zero && kv == EndKind::infinity) || (ku == EndKind::infinity && kv == EndKind::zero))
      return {0.0, 0.0, Relation::same};
    if (ku != EndKind::generic || kv != EndKind::generic) return {0.0, 0.0, Relation::asymptotic};
  }

  const Complex w = std::sqrt(u.z / v.z);
  Complex delta = std::log((1.0 + w) / (1.0 - w));
  if (delta.real() < 0.0) delta = -delta;
  ComplexDistance out;
  out.distance = delta.real();
  out.angle = detail::wrap_angle(delta.imag());
  out.relation = out.distance < tol ? Relation::intersecting : Relation::disjoint;
  if (out.relation == Relation::intersecting) out.distance = 0.0;
  return out;
}

/// Brute-force minimum of point_distance over arclength parameters of both lines:
/// a `grid` x `grid` scan of [-span, span]^2 followed, if `refine`, by a compass search.
/// Independent of the cross-ratio route in line_distance; for checking only.
inline double line_distance_oracle(const GeodesicLine& g1, const GeodesicLine& g2, int grid, bool refine = true,
                                   double span = 30.0) {
  if (grid < 2) throw DomainError("line_distance_oracle: grid must have at least 2 points per axis");
  auto dist = [&](double s1, double s2) { return point_distance(g1.at(s1), g2.at(s2)); };
  const double step = 2.0 * span / (grid - 1);
  double best = std::numeric_limits<double>::infinity();
  double bs1 = 0.0, bs2 = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double s1 = -span + step * i;
      const double s2 = -span + step * j;
      const double d = dist(s1, s2);
      if (d < best) {
        best = d;
        bs1 = s1;
        bs2 = s2;
      }
    }
  }
  if (!refine) return best;
  // Distance between points on two geodesics is jointly convex, so local search finds the minimum.
  double h = step;
  while (h > 1e-13) {
    bool moved = false;
    for (auto [d1, d2] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {1.0, 1.0}, {-1.0, -1.0},
                          {1.0, -1.0}, {-1.0, 1.0}}) {
      const double d = dist(bs1 + h * d1, bs2 + h * d2);
      if (d < best) {
        best = d;
        bs1 += h * d1;
        bs2 += h * d2;
        moved = true;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }
  return best;
}

/// Generators of a Kleinian group together with a word for the loxodromic core
/// element. Letters 'a'.. name generators; capitals denote inverses.
struct GroupPresentation {
  std::vector<MobiusTransform> generators;
  std::string core_word;
};

inline char letter_of(std::size_t generator, bool inverse) {
  return static_cast<char>((inverse ? 'A' : 'a') + static_cast<int>(generator));
}

/// Product of the letters of `word`, left to right.
inline MobiusTransform evaluate_word(const std::vector<MobiusTransform>& gens, const std::string& word) {
  MobiusTransform m;
  for (char ch : word) {
    const bool inverse = ch >= 'A' && ch <= 'Z';
    const bool forward = ch >= 'a' && ch <= 'z';
    if (!inverse && !forward) throw DomainError(std::string("invalid letter '") + ch + "' in word");
    const std::size_t idx = static_cast<std::size_t>(inverse ? ch - 'A' : ch - 'a');
    if (idx >= gens.size()) throw DomainError(std::string("letter '") + ch + "' names a missing generator");
    m = m * (inverse ? gens[idx].inverse() : gens[idx]);
  }
  return m;
}

inline void validate(const GroupPresentation& g) {
  if (g.generators.empty()) throw DomainError("presentation has no generators");
  if (g.generators.size() > 26) throw DomainError("presentation has more than 26 generators");
  if (g.core_word.empty()) throw DomainError("core word is empty");
  for (const auto& m : g.generators)
    if (!m.is_normalized()) throw DomainError("generator is not normalized");
  detail::require_loxodromic(evaluate_word(g.generators, g.core_word), "core word");
}

/// Reads a presentation: one generator per line as eight decimals (re/im of a, b, c, d),
/// then `core: <word>`. Blank lines and lines starting with '#' are skipped.
inline GroupPresentation parse_presentation(std::istream& in) {
  GroupPresentation g;
  bool have_core = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 5, "core:") == 0) {
      if (have_core) throw InputError("line " + std::to_string(lineno) + ": duplicate core word");
      std::istringstream ws(line.substr(first + 5));
      if (!(ws >> g.core_word)) throw InputError("line " + std::to_string(lineno) + ": empty core word");
      have_core = true;
      continue;
    }
    if (have_core) throw InputError("line " + std::to_string(lineno) + ": generator listed after core word");
    std::istringstream ls(line);
    double v[8];
    for (double& x : v)
      if (!(ls >> x)) throw InputError("line " + std::to_string(lineno) + ": expected eight decimals");
    std::string extra;
    if (ls >> extra) throw InputError("line " + std::to_string(lineno) + ": trailing text '" + extra + "'");
    try {
      g.generators.emplace_back(Complex{v[0], v[1]}, Complex{v[2], v[3]}, Complex{v[4], v[5]}, Complex{v[6], v[7]});
    } catch (const DomainError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_core) throw InputError("missing 'core: <word>' line");
  return g;
}

inline GroupPresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file '" + path + "'");
  return parse_presentation(in);
}

struct TubeRadiusResult {
  double radius = std::numeric_limits<double>::infinity();  ///< infinity if no distinct lift was found
  std::string witness;                                       ///< word realizing the minimum
  Complex core_length{};
  std::size_t words_examined = 0;
  std::size_t words_unresolved = 0;  ///< images that collapsed in double precision

  bool found() const { return std::isfinite(radius); }
};

namespace detail {

// Key identifying +-M up to rounding.
inline std::vector<long long> projective_key(const MobiusTransform& m) {
  Complex e[4] = {m.a(), m.b(), m.c(), m.d()};
  double sign = 1.0;
  for (const Complex& x : e) {
    if (std::abs(x.real()) > 1e-9) {
      sign = x.real() > 0 ? 1.0 : -1.0;
      break;
    }
    if (std::abs(x.imag()) > 1e-9) {
      sign = x.imag() > 0 ? 1.0 : -1.0;
      break;
    }
  }
  // Entries are rounded relative to max(1, largest entry), whose binary exponent is
  // part of the key, so long words with huge entries cannot overflow it.
  double scale = 1.0;
  for (const Complex& x : e) scale = std::max({scale, std::abs(x.real()), std::abs(x.imag())});
  const int exp = std::ilogb(scale);
  const double unit = std::ldexp(1.0, exp);
  std::vector<long long> key{exp};
  key.reserve(9);
  for (const Complex& x : e) {
    key.push_back(std::llround(sign * x.real() / unit * 1e9));
    key.push_back(std::llround(sign * x.imag() / unit * 1e9));
  }
  return key;
}

}  // namespace detail

/// Upper bound for the tube radius about the axis of the core element: half the
/// smallest distance from that axis to its images under freely reduced words of
/// length up to `max_word_length`. Words whose image is the axis itself are skipped.
///
/// Longer words can only lower the result. Discreteness of the group is assumed,
/// not checked.
inline TubeRadiusResult tube_radius_upper_bound(const GroupPresentation& g, int max_word_length) {
  validate(g);
  if (max_word_length < 1) throw DomainError("max word length must be positive");
  const MobiusTransform core = evaluate_word(g.generators, g.core_word);
  const GeodesicLine core_axis = axis(core);

  TubeRadiusResult out;
  out.core_length = complex_length(core);

  const std::size_t n = g.generators.size();
  std::vector<MobiusTransform> letters;
  std::vector<char> names;
  for (std::size_t i = 0; i < n; ++i) {
    letters.push_back(g.generators[i]);
    names.push_back(letter_of(i, false));
    letters.push_back(g.generators[i].inverse());
    names.push_back(letter_of(i, true));
  }
  // cancels[j][k]: letter k undoes letter j. Besides k = j ^ 1 this catches involutions,
  // whose two letters are the same element; appending such a letter would only
  // reach a shorter word through catastrophic cancellation.
  auto near_identity = [](const MobiusTransform& m) {
    const double sign = m.a().real() >= 0.0 ? 1.0 : -1.0;
    return std::abs(sign * m.a() - 1.0) < 1e-9 && std::abs(m.b()) < 1e-9 && std::abs(m.c()) < 1e-9 &&
           std::abs(sign * m.d() - 1.0) < 1e-9;
  };
  std::vector<std::vector<bool>> cancels(letters.size(), std::vector<bool>(letters.size()));
  for (std::size_t j = 0; j < letters.size(); ++j)
    for (std::size_t k = 0; k < letters.size(); ++k) cancels[j][k] = near_identity(letters[j] * letters[k]);

  struct Node {
    std::string word;
    MobiusTransform m;
    int last;
  };
  std::set<std::vector<long long>> seen{detail::projective_key(MobiusTransform::identity())};
  std::vector<Node> frontier{{"", MobiusTransform::identity(), -1}};
  double best = std::numeric_limits<double>::infinity();

  for (int len = 1; len <= max_word_length; ++len) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      for (int k = 0; k < static_cast<int>(letters.size()); ++k) {
        if (node.last >= 0 && cancels[static_cast<std::size_t>(node.last)][static_cast<std::size_t>(k)]) continue;
        Node child{node.word + names[k], node.m * letters[k], k};
        if (!seen.insert(detail::projective_key(child.m)).second) continue;
        ++out.words_examined;
        std::optional<GeodesicLine> mapped;
        try {
          mapped = apply(child.m, core_axis);
        } catch (const DomainError&) {
          // Both image endpoints rounded to the same point; the distance is unresolvable.
          ++out.words_unresolved;
          next.push_back(std::move(child));
          continue;
        }
        const GeodesicLine& image = *mapped;
        const ComplexDistance cd = line_distance(core_axis, image);
        const bool stabilizes =
            cd.relation == ComplexDistance::Relation::same ||
            (cd.distance < 1e-9 && line_distance(core_axis, image, 1e-8).relation == ComplexDistance::Relation::same);
        if (!stabilizes && cd.distance < best) {
          best = cd.distance;
          out.witness = child.word;
        }
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  out.radius = std::isfinite(best) ? 0.5 * best : best;
  return out;
}

}  // namespace tubevol
