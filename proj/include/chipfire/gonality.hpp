#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "chipfire/error.hpp"

namespace chipfire {

/// (a, b, h) with degree a*n + b*m - h and rank (a+1)(b+1) - 1 - h, for
/// bidegree (m, n).
struct GonalityTriple {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t h = 0;
  std::int64_t degree = 0;
  std::int64_t rank = 0;

  friend bool operator==(const GonalityTriple&, const GonalityTriple&) = default;
  friend auto operator<=>(const GonalityTriple&, const GonalityTriple&) = default;
};

namespace detail {

inline void require_rank_range(std::int64_t m, std::int64_t n, std::int64_t r) {
  if (m < 1 || n < 1) throw Error(Errc::invalid_parameter, "bidegree entries must be positive");
  const std::int64_t genus = (m - 1) * (n - 1);
  if (r <= 0 || r >= genus)
    throw Error(Errc::invalid_parameter, "rank " + std::to_string(r) + " outside 0 < r < " +
                                             std::to_string(genus));
}

inline GonalityTriple make_triple(std::int64_t m, std::int64_t n, std::int64_t a, std::int64_t b,
                                  std::int64_t h) {
  return {a, b, h, a * n + b * m - h, (a + 1) * (b + 1) - 1 - h};
}

// h is fixed by (a, b, r); only the box for (a, b) and the cap on h differ
// between the full and the restricted index set.
inline std::vector<GonalityTriple> triples_in_box(std::int64_t m, std::int64_t n, std::int64_t r,
                                                  std::int64_t a_max, std::int64_t b_max,
                                                  bool cap_h) {
  std::vector<GonalityTriple> out;
  for (std::int64_t a = 0; a <= a_max; ++a)
    for (std::int64_t b = 0; b <= b_max; ++b) {
      const std::int64_t h = (a + 1) * (b + 1) - 1 - r;
      if (h < 0) continue;
      if (cap_h && h > std::min(a, b)) continue;
      out.push_back(make_triple(m, n, a, b, h));
    }
  return out;
}

inline std::int64_t min_degree(const std::vector<GonalityTriple>& triples) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& t : triples) best = std::min(best, t.degree);
  return best;
}

}  // namespace detail

/// All (a, b, h) with 0 <= a <= m-1, 0 <= b <= n-1, h >= 0 and rank r,
/// ordered by (a, b).
inline std::vector<GonalityTriple> enumerate_Ir(std::int64_t m, std::int64_t n, std::int64_t r) {
  detail::require_rank_range(m, n, r);
  return detail::triples_in_box(m, n, r, m - 1, n - 1, false);
}

/// The restricted set: a <= m-2, b <= n-2, h <= min(a, b).
inline std::vector<GonalityTriple> enumerate_Ir_restricted(std::int64_t m, std::int64_t n,
                                                           std::int64_t r) {
  detail::require_rank_range(m, n, r);
  return detail::triples_in_box(m, n, r, m - 2, n - 2, true);
}

/// Minimal degree a*n + b*m - h over the full index set. Also checks that the
/// restricted set attains the same minimum.
inline std::int64_t delta(std::int64_t m, std::int64_t n, std::int64_t r) {
  const std::int64_t full = detail::min_degree(enumerate_Ir(m, n, r));
  detail::ensure(full == detail::min_degree(enumerate_Ir_restricted(m, n, r)),
                 "restricted index set must attain the same minimum");
  return full;
}

/// Whether (a, b) maximizes (m-a-1)(n-b-1) among the admissible pairs for
/// rank r, i.e. those with (a+1)(b+1) - 1 - r >= 0 inside the box.
inline bool is_maximal_pair(std::int64_t m, std::int64_t n, std::int64_t r, std::int64_t a,
                            std::int64_t b) {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  for (const auto& t : enumerate_Ir(m, n, r))
    best = std::max(best, (m - t.a - 1) * (n - t.b - 1));
  return (m - a - 1) * (n - b - 1) == best;
}

/// Every triple attaining delta(m, n, r); there can be several.
inline std::vector<GonalityTriple> optimal_triples(std::int64_t m, std::int64_t n, std::int64_t r) {
  const auto all = enumerate_Ir(m, n, r);
  const std::int64_t best = detail::min_degree(all);
  std::vector<GonalityTriple> out;
  for (const auto& t : all)
    if (t.degree == best) {
      detail::ensure(is_maximal_pair(m, n, r, t.a, t.b),
                     "a minimizing triple must maximize (m-a-1)(n-b-1)");
      out.push_back(t);
    }
  return out;
}

/// Ranks r in 1..g-2 where d_r / r < d_{r+1} / (r+1), with d_r = delta.
inline std::vector<std::int64_t> slope_scan(std::int64_t m, std::int64_t n) {
  if (m < 1 || n < 1) throw Error(Errc::invalid_parameter, "bidegree entries must be positive");
  const std::int64_t genus = (m - 1) * (n - 1);
  std::vector<std::int64_t> out;
  for (std::int64_t r = 1; r + 1 < genus; ++r)
    if (delta(m, n, r) * (r + 1) < delta(m, n, r + 1) * r) out.push_back(r);
  return out;
}

struct PlaneDecomposition {
  std::int64_t k = 0;
  std::int64_t h = 0;
};

/// The unique 1 <= k <= d-3, 0 <= h <= k with r = k(k+3)/2 - h.
inline PlaneDecomposition plane_curve_decomposition(std::int64_t d, std::int64_t r) {
  if (d < 4) throw Error(Errc::invalid_parameter, "plane curve degree must be at least 4");
  const std::int64_t genus = (d - 1) * (d - 2) / 2;
  if (r <= 0 || r >= genus)
    throw Error(Errc::invalid_parameter, "rank " + std::to_string(r) + " outside 0 < r < " +
                                             std::to_string(genus));
  // The k-th block of ranks is [k(k+1)/2, k(k+3)/2]; consecutive blocks tile.
  std::int64_t k = 1;
  while (k * (k + 3) / 2 < r) ++k;
  return {k, k * (k + 3) / 2 - r};
}

inline std::int64_t plane_curve_dr(std::int64_t d, std::int64_t r) {
  const auto [k, h] = plane_curve_decomposition(d, r);
  return k * d - h;
}

}  // namespace chipfire
