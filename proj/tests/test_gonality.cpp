#include <gtest/gtest.h>

#include <algorithm>

#include "chipfire/gonality.hpp"

using namespace chipfire;

namespace {

std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> abh(const std::vector<GonalityTriple>& ts) {
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> out;
  for (const auto& t : ts) out.emplace_back(t.a, t.b, t.h);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(IndexSet, K33RankOne) {
  const auto ts = enumerate_Ir(3, 3, 1);
  EXPECT_EQ(ts.size(), 8u);
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> expected{
      {1, 0, 0}, {0, 1, 0}, {1, 1, 2}, {2, 0, 1}, {0, 2, 1}, {2, 1, 4}, {1, 2, 4}, {2, 2, 7}};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(abh(ts), expected);
  for (const auto& t : ts) {
    EXPECT_EQ(t.rank, 1);
    EXPECT_EQ(t.degree, t.a * 3 + t.b * 3 - t.h);
  }
}

TEST(IndexSet, RestrictedSetAttainsTheSameMinimum) {
  for (int m = 2; m <= 12; ++m)
    for (int n = 2; n <= 12; ++n)
      for (int r = 1; r < (m - 1) * (n - 1); ++r) {
        std::int64_t full = 1 << 30, restricted = 1 << 30;
        for (const auto& t : enumerate_Ir(m, n, r)) full = std::min(full, t.degree);
        for (const auto& t : enumerate_Ir_restricted(m, n, r)) {
          EXPECT_LE(t.a, m - 2);
          EXPECT_LE(t.b, n - 2);
          EXPECT_LE(t.h, std::min(t.a, t.b));
          restricted = std::min(restricted, t.degree);
        }
        EXPECT_EQ(full, restricted) << m << "," << n << "," << r;
      }
}

TEST(IndexSet, RejectsRanksOutsideTheSpecialRange) {
  EXPECT_THROW(enumerate_Ir(3, 3, 0), Error);
  EXPECT_THROW(enumerate_Ir(3, 3, 4), Error);
  EXPECT_THROW(delta(2, 2, 1), Error);
}

TEST(Delta, BidegreeSevenFive) {
  EXPECT_EQ(delta(7, 5, 5), 17);
  EXPECT_EQ(delta(7, 5, 6), 21);
  EXPECT_EQ(delta(7, 5, 11), 29);
  EXPECT_EQ(delta(7, 5, 12), 32);
}

TEST(Delta, BidegreeFiveFour) {
  EXPECT_EQ(delta(5, 4, 1), 4);
  EXPECT_EQ(delta(5, 4, 2), 8);
  EXPECT_EQ(delta(5, 4, 3), 9);
}

TEST(Delta, GonalityIsMinOfBidegree) {
  for (int m = 2; m <= 12; ++m)
    for (int n = 2; n <= 12; ++n)
      if ((m - 1) * (n - 1) > 1) {
        EXPECT_EQ(delta(m, n, 1), std::min(m, n));
      }
}

TEST(Delta, SymmetricAndStrictlyIncreasing) {
  for (int m = 2; m <= 9; ++m)
    for (int n = 2; n <= 9; ++n) {
      const int g = (m - 1) * (n - 1);
      for (int r = 1; r < g; ++r) {
        EXPECT_EQ(delta(m, n, r), delta(n, m, r));
        if (r + 1 < g) {
          EXPECT_LT(delta(m, n, r), delta(m, n, r + 1));
        }
      }
      // Just below the genus the formula meets Riemann-Roch: d_{g-1} = 2g - 2.
      if (g > 1) {
        EXPECT_EQ(delta(m, n, g - 1), 2 * g - 2);
      }
    }
}

TEST(OptimalTriples, Examples) {
  EXPECT_EQ(abh(optimal_triples(5, 4, 2)),
            (std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{{1, 1, 1}, {2, 0, 0}}));
  EXPECT_EQ(abh(optimal_triples(5, 4, 3)),
            (std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{{1, 1, 0}}));
  EXPECT_EQ(abh(optimal_triples(3, 3, 2)),
            (std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{{1, 1, 1}}));
}

TEST(OptimalTriples, MaximizeTheComplementProduct) {
  for (int m = 2; m <= 8; ++m)
    for (int n = 2; n <= 8; ++n)
      for (int r = 1; r < (m - 1) * (n - 1); ++r)
        for (const auto& t : optimal_triples(m, n, r)) {
          EXPECT_TRUE(is_maximal_pair(m, n, r, t.a, t.b));
          EXPECT_EQ(t.degree, r + (m - 1) * (n - 1) - (m - t.a - 1) * (n - t.b - 1));
        }
}

TEST(SlopeScan, Examples) {
  EXPECT_EQ(slope_scan(7, 5), (std::vector<std::int64_t>{5, 11}));
  EXPECT_TRUE(slope_scan(2, 2).empty());
  EXPECT_TRUE(slope_scan(3, 3).empty());
}

TEST(PlaneCurve, Examples) {
  EXPECT_EQ(plane_curve_dr(5, 1), 4);
  EXPECT_EQ(plane_curve_dr(5, 2), 5);
  EXPECT_EQ(plane_curve_dr(5, 5), 10);
  const auto dec = plane_curve_decomposition(5, 5);
  EXPECT_EQ(dec.k, 2);
  EXPECT_EQ(dec.h, 0);
}

TEST(PlaneCurve, GonalityIsDegreeMinusOne) {
  for (int d = 4; d <= 10; ++d) EXPECT_EQ(plane_curve_dr(d, 1), d - 1);
}

TEST(PlaneCurve, DecompositionIsUniqueAndTotal) {
  for (int d = 1; d <= 10; ++d) {
    const int g = (d - 1) * (d - 2) / 2;
    for (int r = 1; r < g; ++r) {
      int matches = 0;
      for (int k = 1; k <= d - 3; ++k)
        for (int h = 0; h <= k; ++h)
          if (r == k * (k + 3) / 2 - h) ++matches;
      EXPECT_EQ(matches, 1) << d << "," << r;
      const auto dec = plane_curve_decomposition(d, r);
      EXPECT_EQ(dec.k * (dec.k + 3) / 2 - dec.h, r);
      EXPECT_EQ(plane_curve_dr(d, r), dec.k * d - dec.h);
    }
  }
}
