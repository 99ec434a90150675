#pragma once

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tubevol/kleinian.hpp"

namespace tubevol::testing {

inline ::testing::AssertionResult rel_near(double actual, double expected, double rel) {
  const double scale = std::max(std::abs(expected), 1e-300);
  if (std::abs(actual - expected) <= rel * scale) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "actual " << actual << " vs expected " << expected << " (relative error "
                                       << std::abs(actual - expected) / scale << " > " << rel << ")";
}

/// Seeded generator for property checks.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Complex complex_in_box(double half_width) { return {uniform(-half_width, half_width), uniform(-half_width, half_width)}; }

  MobiusTransform mobius(double spread = 2.0) {
    while (true) {
      const Complex a = complex_in_box(spread), b = complex_in_box(spread), c = complex_in_box(spread),
                    d = complex_in_box(spread);
      if (std::abs(a * d - b * c) > 0.1) return {a, b, c, d};
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace tubevol::testing
