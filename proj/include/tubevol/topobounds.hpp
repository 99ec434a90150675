#pragma once

// Volume bounds driven by topological invariants. The invariants themselves
// (Euler characteristic of the guts, Gromov norms of doubles, twist numbers)
// are inputs; nothing here computes them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "tubevol/errors.hpp"
#include "tubevol/hypkernel.hpp"

namespace tubevol {

/// Guts of a manifold cut along an essential surface.
struct GutsData {
  long euler_characteristic = 0;
  std::optional<double> double_gromov_norm;

  GutsData(long chi, std::optional<double> norm = std::nullopt)
      : euler_characteristic(chi), double_gromov_norm(norm) {
    if (chi > 0) throw DomainError("guts have nonpositive Euler characteristic");
    if (norm && (!std::isfinite(*norm) || *norm < 0.0))
      throw DomainError("Gromov norm must be finite and nonnegative");
  }
};

/// Prime alternating diagram, reduced to its twist number.
struct AlternatingDiagram {
  long twist_number;

  explicit AlternatingDiagram(long t) : twist_number(t) {
    if (t < 2) throw DomainError("twist number of a hyperbolic alternating diagram is at least 2");
  }
};

/// -V8 * chi
inline double miyamoto_lower_bound(long chi) {
  if (chi > 0) throw DomainError("Miyamoto bound needs chi <= 0");
  return -v8() * static_cast<double>(chi);
}

/// V3/2 * ||DX|| for a manifold X with minimal-surface boundary.
inline double haken_double_bound(double double_gromov_norm) {
  if (!std::isfinite(double_gromov_norm) || double_gromov_norm < 0.0)
    throw DomainError("Gromov norm must be finite and nonnegative");
  return 0.5 * v3() * double_gromov_norm;
}

/// Both tiers of the guts bound and the best of them.
struct GutsBound {
  double from_norm;  ///< V3/2 ||D(M\\S)||, or 0 when the norm is not supplied
  double from_chi;   ///< -V8 chi(guts)
  double best;
};

inline GutsBound guts_bound_tiers(const GutsData& g) {
  GutsBound b{};
  b.from_chi = miyamoto_lower_bound(g.euler_characteristic);
  b.from_norm = g.double_gromov_norm ? haken_double_bound(*g.double_gromov_norm) : 0.0;
  b.best = std::max(b.from_chi, b.from_norm);
  return b;
}

inline double guts_lower_bound(const GutsData& g) { return guts_bound_tiers(g).best; }

struct VolumeWindow {
  double lower;
  double upper;
};

/// V8 (t/2 - 1) <= Vol <= 10 V3 (t - 1) for a prime alternating hyperbolic link with twist number t.
inline VolumeWindow alternating_volume_window(const AlternatingDiagram& d) {
  const auto t = static_cast<double>(d.twist_number);
  return {v8() * (t / 2.0 - 1.0), 10.0 * v3() * (t - 1.0)};
}

/// Smallest filled-volume lower bound over geodesic lengths on a uniform grid of
/// `steps` points in (0, L_max], starting from a drilled volume `v_cusped_min`.
///
/// This is only a true lower bound for the closed manifold when L_max bounds the
/// length of the drilled geodesic; the caller supplies that control.
inline double min_volume_scan(double v_cusped_min, double radius, double max_length, long steps) {
  if (!(v_cusped_min > 0.0) || !(radius > 0.0) || !(max_length > 0.0) || steps < 1)
    throw DomainError("min_volume_scan: all arguments must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (long i = 1; i <= steps; ++i) {
    const double len = max_length * static_cast<double>(i) / static_cast<double>(steps);
    best = std::min(best, filled_volume_lower_bound(v_cusped_min, TubeData(len, radius)));
  }
  return best;
}

}  // namespace tubevol
