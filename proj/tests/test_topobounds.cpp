#include <cmath>

#include <gtest/gtest.h>

#include "tubevol/topobounds.hpp"

using namespace tubevol;

namespace {
constexpr double kV3 = 1.01494160640965362502;
constexpr double kV8 = 3.66386237670887606022;
const double kHalfLn3 = 0.5 * std::log(3.0);
}  // namespace

TEST(Miyamoto, LinearInChi) {
  EXPECT_EQ(miyamoto_lower_bound(0), 0.0);
  EXPECT_NEAR(miyamoto_lower_bound(-1), kV8, 1e-12);
  EXPECT_NEAR(miyamoto_lower_bound(-3), 3.0 * kV8, 1e-12);
  EXPECT_THROW(miyamoto_lower_bound(1), DomainError);
}

TEST(GutsBound, TakesTheBetterTier) {
  EXPECT_EQ(guts_lower_bound(GutsData(0)), 0.0);
  EXPECT_NEAR(guts_lower_bound(GutsData(-1)), kV8, 1e-12);
  // 4 V3 = 4.0598 exceeds V8 = 3.6639, so the norm tier wins.
  const GutsBound b = guts_bound_tiers(GutsData(-1, 8.0));
  EXPECT_NEAR(b.from_norm, 4.0 * kV3, 1e-12);
  EXPECT_NEAR(b.from_chi, kV8, 1e-12);
  EXPECT_NEAR(b.best, 4.0597664256386145, 1e-12);
  // A small norm leaves the Euler characteristic tier in charge.
  EXPECT_NEAR(guts_lower_bound(GutsData(-2, 1.0)), 2.0 * kV8, 1e-12);
}

TEST(GutsBound, NormTierNeverLowersTheBound) {
  for (long chi = 0; chi >= -6; --chi) {
    for (double norm = 0.0; norm <= 40.0; norm += 0.5) {
      const double with = guts_lower_bound(GutsData(chi, norm));
      const double without = guts_lower_bound(GutsData(chi));
      EXPECT_GE(with, without);
      if (0.5 * kV3 * norm >= -kV8 * static_cast<double>(chi)) {
        EXPECT_NEAR(with, 0.5 * kV3 * norm, 1e-12);
      }
    }
  }
}

TEST(GutsData, Validation) {
  EXPECT_THROW(GutsData(1), DomainError);
  EXPECT_THROW(GutsData(-1, -0.5), DomainError);
  EXPECT_THROW(GutsData(-1, NAN), DomainError);
}

TEST(AlternatingWindow, AnchorsAndOrdering) {
  const auto w2 = alternating_volume_window(AlternatingDiagram(2));
  EXPECT_EQ(w2.lower, 0.0);
  EXPECT_GT(w2.upper, 0.0);
  const auto w6 = alternating_volume_window(AlternatingDiagram(6));
  EXPECT_NEAR(w6.lower, 2.0 * kV8, 1e-12);
  EXPECT_NEAR(w6.lower, 7.32772475341775212, 1e-12);
  EXPECT_NEAR(w6.upper, 50.7470803204826812511, 1e-11);
  double prev_lo = -1.0, prev_hi = -1.0;
  for (long t = 2; t <= 200; ++t) {
    const auto w = alternating_volume_window(AlternatingDiagram(t));
    if (t >= 3) {
      EXPECT_LT(w.lower, w.upper);
    }
    EXPECT_GT(w.lower, prev_lo);
    EXPECT_GT(w.upper, prev_hi);
    prev_lo = w.lower;
    prev_hi = w.upper;
  }
  EXPECT_THROW(AlternatingDiagram(1), DomainError);
}

TEST(HakenDouble, Linear) {
  EXPECT_EQ(haken_double_bound(0.0), 0.0);
  EXPECT_NEAR(haken_double_bound(2.0), kV3, 1e-12);
  EXPECT_NEAR(haken_double_bound(8.0), 4.0 * kV3, 1e-12);
  EXPECT_THROW(haken_double_bound(-1.0), DomainError);
}

TEST(MinVolumeScan, SmallLengthLimit) {
  EXPECT_NEAR(min_volume_scan(2.0 * kV3, kHalfLn3, 1e-9, 10), 1.03930020496348531202, 1e-9);
}

TEST(MinVolumeScan, RightEndpointNearPointSixSeven) {
  // 1.0393 - (pi/5) L = 0.67 at L = 0.58776.
  const double v = min_volume_scan(2.0 * kV3, kHalfLn3, 0.5877, 10000);
  EXPECT_NEAR(v, 0.67003740446054101466, 1e-12);
  EXPECT_NEAR(v, 0.67, 1e-4);
}

TEST(MinVolumeScan, MonotoneInMaxLength) {
  double prev = INFINITY;
  for (double lmax = 0.05; lmax < 3.0; lmax += 0.05) {
    const double v = min_volume_scan(2.0 * kV3, kHalfLn3, lmax, 200);
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_THROW(min_volume_scan(1.0, 1.0, 1.0, 0), DomainError);
  EXPECT_THROW(min_volume_scan(1.0, 0.0, 1.0, 10), DomainError);
}
