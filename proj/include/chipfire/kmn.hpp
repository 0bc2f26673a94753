#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chipfire/dhar.hpp"
#include "chipfire/error.hpp"
#include "chipfire/gonality.hpp"
#include "chipfire/graph.hpp"

// Divisor analysis on the complete bipartite graph K_{m,n}. Vertex ids follow
// complete_bipartite(): v_i is id i-1 and w_j is id m+j-1. The sink is always
// v_m.

namespace chipfire::kmn {

inline VertexId v_vertex(std::int64_t /*m*/, std::int64_t i) { return static_cast<VertexId>(i - 1); }
inline VertexId w_vertex(std::int64_t m, std::int64_t j) { return static_cast<VertexId>(m + j - 1); }
inline VertexId sink(std::int64_t m) { return static_cast<VertexId>(m - 1); }
inline bool is_w(std::int64_t m, VertexId v) { return static_cast<std::int64_t>(v) >= m; }

inline std::int64_t positive_part(std::int64_t x) { return x > 0 ? x : 0; }

namespace detail {

inline void require_bipartite_divisor(std::int64_t m, std::int64_t n, const Divisor& d) {
  if (m < 2 || n < 2) throw Error(Errc::invalid_parameter, "K_{m,n} analysis needs m, n >= 2");
  if (d.size() != static_cast<std::size_t>(m + n))
    throw Error(Errc::invalid_divisor, "divisor is not defined on K_{m,n}");
}

inline void require_reduced(const Multigraph& g, std::int64_t m, const Divisor& d) {
  if (!is_reduced(g, d, sink(m)))
    throw Error(Errc::invalid_input, "divisor is not reduced with respect to v_m");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The divisor b * sum(v_i) + a * sum(w_j) and its rank trace
// ---------------------------------------------------------------------------

/// b chips on every v_i and a chips on every w_j; degree a*n + b*m.
inline Divisor ab_divisor(std::int64_t m, std::int64_t n, std::int64_t a, std::int64_t b) {
  if (m < 1 || n < 1) throw Error(Errc::invalid_parameter, "K_{m,n} needs m, n >= 1");
  if (a < 0 || b < 0) throw Error(Errc::invalid_parameter, "a and b must be nonnegative");
  Divisor d(static_cast<std::size_t>(m + n));
  for (std::int64_t i = 1; i <= m; ++i) d[v_vertex(m, i)] = b;
  for (std::int64_t j = 1; j <= n; ++j) d[w_vertex(m, j)] = a;
  return d;
}

struct DlbResult {
  Chips rank = -1;
  /// trace[0] is the v_m-reduced input; trace[k] is the reduced divisor after
  /// the k-th subtraction. The last entry is negative at v_m.
  std::vector<Divisor> trace;
  /// subtracted[k] is the w-vertex removed to go from trace[k] to trace[k+1].
  std::vector<VertexId> subtracted;

  std::size_t steps() const noexcept { return subtracted.size(); }
};

/// Step-counting rank on K_{m,n}: while the v_m-reduced divisor is
/// nonnegative at v_m, subtract one chip at the lowest-index w-vertex with no
/// chips and reduce again. rank = steps - 1. Throws out_of_domain when no
/// w-vertex is empty.
inline DlbResult dlb_rank(std::int64_t m, std::int64_t n, const Divisor& d) {
  detail::require_bipartite_divisor(m, n, d);
  const Multigraph g = complete_bipartite(static_cast<int>(m), static_cast<int>(n));
  const VertexId q = sink(m);
  ::chipfire::detail::Reducer reducer(g, q);

  DlbResult out;
  Divisor cur = d;
  reducer.run(cur);
  out.trace.push_back(cur);
  while (cur[q] >= 0) {
    std::optional<VertexId> target;
    for (std::int64_t j = 1; j <= n && !target; ++j)
      if (cur[w_vertex(m, j)] == 0) target = w_vertex(m, j);
    if (!target)
      throw Error(Errc::out_of_domain,
                  "no w-vertex has coefficient zero after " + std::to_string(out.steps()) + " steps");
    cur[*target] -= 1;
    reducer.run(cur);
    out.subtracted.push_back(*target);
    out.trace.push_back(cur);
    ::chipfire::detail::ensure(static_cast<Chips>(out.steps()) <= std::max<Chips>(d.degree(), 0) + 1,
                               "step count is bounded by the degree");
  }
  out.rank = static_cast<Chips>(out.steps()) - 1;
  return out;
}

inline DlbResult dlb_rank(std::int64_t m, std::int64_t n, std::int64_t a, std::int64_t b) {
  return dlb_rank(m, n, ab_divisor(m, n, a, b));
}

/// Closed form of the divisor reached after the subtraction labelled (s, t),
/// i.e. after t full rounds of b+1 subtractions plus s more.
///   s <= b:  (b-s) on v_1..v_{m-1}, (a-t)n + b - s on v_m, m-1 on w_1..w_s,
///            t on w_{b+2}..w_n;
///   s = b+1: b on v_1..v_{m-1}, b + (a-t-1)n on v_m, t+1 on w_{b+2}..w_n.
/// Every step except the terminal one (s, t) = (b+1, a) is v_m-reduced.
inline Divisor dst_closed_form(std::int64_t m, std::int64_t n, std::int64_t a, std::int64_t b,
                               std::int64_t s, std::int64_t t) {
  if (m < 2 || n < 2) throw Error(Errc::invalid_parameter, "K_{m,n} analysis needs m, n >= 2");
  if (a < 0 || b < 0 || b > n - 1)
    throw Error(Errc::invalid_parameter, "closed form needs a >= 0 and 0 <= b <= n-1");
  if (s < 1 || s > b + 1 || t < 0 || t > a)
    throw Error(Errc::invalid_parameter, "step (s,t) out of range");
  Divisor d(static_cast<std::size_t>(m + n));
  if (s <= b) {
    for (std::int64_t i = 1; i < m; ++i) d[v_vertex(m, i)] = b - s;
    d[sink(m)] = (a - t) * n + b - s;
    for (std::int64_t j = 1; j <= s; ++j) d[w_vertex(m, j)] = m - 1;
    for (std::int64_t j = b + 2; j <= n; ++j) d[w_vertex(m, j)] = t;
  } else {
    for (std::int64_t i = 1; i < m; ++i) d[v_vertex(m, i)] = b;
    d[sink(m)] = b + (a - t - 1) * n;
    for (std::int64_t j = b + 2; j <= n; ++j) d[w_vertex(m, j)] = t + 1;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Orders on K_{m,n}
// ---------------------------------------------------------------------------

struct NormalizedOrder {
  /// Total order starting at v_m.
  std::vector<VertexId> order;
  /// The non-sink v-vertices and the w-vertices in the order they appear;
  /// position i plays the role of v_{i+1} (resp. w_{i+1}).
  std::vector<VertexId> v_order;
  std::vector<VertexId> w_order;
};

namespace detail {

inline NormalizedOrder split_order(std::int64_t m, std::vector<VertexId> order) {
  NormalizedOrder out;
  for (VertexId v : order) {
    if (v == sink(m)) continue;
    (is_w(m, v) ? out.w_order : out.v_order).push_back(v);
  }
  out.order = std::move(order);
  return out;
}

inline void require_order(const Multigraph& g, std::int64_t m, const Divisor& d,
                          std::span<const VertexId> order) {
  if (!is_reduction_order(g, d, sink(m), order))
    throw Error(Errc::invalid_input, "order does not certify reducedness");
}

}  // namespace detail

/// A reduction order in which every non-sink v-vertex has exactly one chip
/// fewer than its number of earlier edges. Starting from the greedy order, a
/// v-vertex with slack is moved in front of the nearest preceding w-vertex
/// until no slack remains.
inline NormalizedOrder normalize_order(std::int64_t m, std::int64_t n, const Divisor& d) {
  detail::require_bipartite_divisor(m, n, d);
  const Multigraph g = complete_bipartite(static_cast<int>(m), static_cast<int>(n));
  detail::require_reduced(g, m, d);
  auto greedy = find_reduction_order(g, d, sink(m));
  ::chipfire::detail::ensure(greedy.has_value(), "reduced divisor must admit a reduction order");
  std::vector<VertexId> order = std::move(*greedy);

  for (;;) {
    const auto values = order_values(g, d, order);
    std::optional<std::size_t> slack;
    for (std::size_t pos = 1; pos < order.size() && !slack; ++pos) {
      const VertexId v = order[pos];
      if (!is_w(m, v) && values.weight[v] < values.earlier_edges[v] - 1) slack = pos;
    }
    if (!slack) break;
    std::size_t w_pos = *slack;
    while (!is_w(m, order[w_pos])) --w_pos;  // slack implies an earlier w exists
    std::rotate(order.begin() + static_cast<std::ptrdiff_t>(w_pos),
                order.begin() + static_cast<std::ptrdiff_t>(*slack),
                order.begin() + static_cast<std::ptrdiff_t>(*slack) + 1);
  }

  ::chipfire::detail::ensure(is_reduction_order(g, d, sink(m), order),
                             "normalized order must still certify reducedness");
  return detail::split_order(m, std::move(order));
}

/// r_i = weight(w_i) + 1 - #{j < m : weight(v_j) <= i - 2}, with w_i the i-th
/// w-vertex of the order. Bounded by 1 whenever the order is valid.
inline std::vector<std::int64_t> r_vector(std::int64_t m, std::int64_t n, const Divisor& d,
                                          std::span<const VertexId> order) {
  detail::require_bipartite_divisor(m, n, d);
  const Multigraph g = complete_bipartite(static_cast<int>(m), static_cast<int>(n));
  detail::require_reduced(g, m, d);
  detail::require_order(g, m, d, order);
  const auto values = order_values(g, d, order);
  const auto split = detail::split_order(m, std::vector<VertexId>(order.begin(), order.end()));
  std::vector<std::int64_t> out;
  for (std::size_t idx = 0; idx < split.w_order.size(); ++idx) {
    const std::int64_t i = static_cast<std::int64_t>(idx) + 1;
    std::int64_t low = 0;
    for (VertexId v : split.v_order)
      if (values.weight[v] <= i - 2) ++low;
    out.push_back(values.weight[split.w_order[idx]] + 1 - low);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The alpha / beta sequence machinery for the lower bound
// ---------------------------------------------------------------------------

/// Parameters of the lower-bound argument: bidegree (m, n), an optimal triple
/// (a, b, h) and the split D(v_m) = A n + B.
struct KmnParams {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t h = 0;
  std::int64_t A = 0;
  std::int64_t B = 0;

  std::int64_t r() const noexcept { return (a + 1) * (b + 1) - 1 - h; }
  std::int64_t genus() const noexcept { return (m - 1) * (n - 1); }
  std::int64_t lower() const noexcept { return A + 2 - m; }
  std::int64_t upper() const noexcept { return A + 1; }

  /// Required sum of an alpha sequence.
  std::int64_t alpha_sum() const noexcept {
    return a * n + b * m - h + m + 2 * n - n * m - B - 2;
  }

  /// Whether some integer sequence of length n meets the bounds and the sum.
  bool feasible() const noexcept {
    const std::int64_t s = alpha_sum();
    return n * lower() <= s && s <= n * upper();
  }

  friend bool operator==(const KmnParams&, const KmnParams&) = default;
};

inline void validate(const KmnParams& p) {
  auto fail = [](const std::string& why) { throw Error(Errc::invalid_parameter, why); };
  if (p.m < 2 || p.n < 2) fail("m and n must be at least 2");
  if (p.a < 0 || p.a > p.m - 1) fail("a must lie in [0, m-1]");
  if (p.b < 0 || p.b > p.n - 1) fail("b must lie in [0, n-1]");
  if (p.h < 0) fail("h must be nonnegative");
  if (p.A < 0) fail("A must be nonnegative");
  if (p.B < 0 || p.B > p.n - 1) fail("B must lie in [0, n-1]");
  if (p.r() <= 0 || p.r() >= p.genus()) fail("rank must satisfy 0 < r < (m-1)(n-1)");
  if (!is_maximal_pair(p.m, p.n, p.r(), p.a, p.b)) fail("(a,b) does not maximize (m-a-1)(n-b-1)");
}

struct AlphaSequence {
  std::int64_t A = 0;
  std::int64_t B = 0;
  std::vector<std::int64_t> values;
};

/// alpha_i = weight(w_i) + A - (earlier_edges(w_i) - 2) for the i-th w-vertex
/// of the order, where D(v_m) = A n + B.
inline AlphaSequence alpha_of(std::int64_t m, std::int64_t n, const Divisor& d,
                              std::span<const VertexId> order) {
  detail::require_bipartite_divisor(m, n, d);
  if (d[sink(m)] < 0) throw Error(Errc::invalid_input, "D(v_m) must be nonnegative");
  const Multigraph g = complete_bipartite(static_cast<int>(m), static_cast<int>(n));
  detail::require_reduced(g, m, d);
  detail::require_order(g, m, d, order);

  AlphaSequence out;
  out.A = d[sink(m)] / n;
  out.B = d[sink(m)] % n;
  const auto values = order_values(g, d, order);
  for (VertexId v : order)
    if (is_w(m, v)) out.values.push_back(values.weight[v] + out.A - (values.earlier_edges[v] - 2));
  return out;
}

struct BetaSequence {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::vector<std::int64_t> values;
};

/// The extremal sequence: p entries A+1, then q, then A+2-m, with the same sum
/// as an alpha sequence. (p, q) come from dividing
///   a n + b m - h + m - A n - B - 2
/// by m - 1. p = 0 is admitted (the leading entry is then q).
inline BetaSequence beta_of(const KmnParams& params) {
  validate(params);
  const auto& P = params;
  if (P.lower() > 0) throw Error(Errc::no_sequence, "A + 2 - m > 0: no extremal sequence needed");
  const std::int64_t rhs = P.a * P.n + P.b * P.m - P.h + P.m - P.A * P.n - P.B - 2;
  if (rhs < 0) throw Error(Errc::no_sequence, "sum is below n(A+2-m)");
  BetaSequence out;
  out.p = rhs / (P.m - 1);
  const std::int64_t rem = rhs % (P.m - 1);
  out.q = P.lower() + rem;
  if (out.p > P.n || (out.p == P.n && rem > 0))
    throw Error(Errc::no_sequence, "sum exceeds n(A+1)");
  out.values.assign(static_cast<std::size_t>(P.n), P.lower());
  for (std::int64_t i = 0; i < out.p; ++i) out.values[static_cast<std::size_t>(i)] = P.upper();
  if (out.p < P.n) out.values[static_cast<std::size_t>(out.p)] = out.q;
  return out;
}

inline std::int64_t sum_positive(std::span<const std::int64_t> xs, std::int64_t shift = 0) {
  std::int64_t s = 0;
  for (auto x : xs) s += positive_part(x - shift);
  return s;
}

/// sum(alpha^+) <= sum(beta^+) and sum((alpha-1)^+) <= sum((beta-1)^+).
inline bool worstcase_dominates(std::span<const std::int64_t> alpha, const BetaSequence& beta) {
  std::int64_t sa = 0, sb = 0;
  for (auto x : alpha) sa += x;
  for (auto x : beta.values) sb += x;
  if (alpha.size() != beta.values.size() || sa != sb)
    throw Error(Errc::invalid_pair, "sequences differ in length or sum");
  return sum_positive(alpha) <= sum_positive(beta.values) &&
         sum_positive(alpha, 1) <= sum_positive(beta.values, 1);
}

struct ClaimResult {
  std::int64_t t1 = 0;
  std::int64_t t2 = 0;
  std::int64_t r = 0;
  bool holds = false;
  bool easy_case = false;
  /// Easy case only: r - t2 and the product (m-a-1)(n-b-1) it must equal,
  /// plus the variant (n-a-1)(n-b-1) for comparison.
  std::int64_t gap = 0;
  std::int64_t gap_mn = 0;
  std::int64_t gap_nn = 0;
};

/// Checks min(t1, t2) <= r for the extremal sequence (or the closed form
/// when A + 2 - m > 0).
inline ClaimResult verify_claim(const KmnParams& params) {
  validate(params);
  const auto& P = params;
  ClaimResult out;
  out.r = P.r();
  if (P.lower() > 0) {
    out.easy_case = true;
    // Every alpha_i >= 1 here, so both sums are determined by the total.
    out.t1 = P.alpha_sum();
    out.t2 = P.a * P.n + P.b * P.m - P.h + P.m + P.n - P.n * P.m - 1;
    out.gap = out.r - out.t2;
    out.gap_mn = (P.m - P.a - 1) * (P.n - P.b - 1);
    out.gap_nn = (P.n - P.a - 1) * (P.n - P.b - 1);
    ::chipfire::detail::ensure(out.gap == out.gap_mn, "r - t2 must equal (m-a-1)(n-b-1)");
  } else {
    const auto beta = beta_of(P);
    out.t1 = sum_positive(beta.values);
    out.t2 = P.B + 1 + sum_positive(beta.values, 1);
  }
  out.holds = std::min(out.t1, out.t2) <= out.r;
  return out;
}

/// t1 and t2 evaluated on an arbitrary sequence.
inline std::pair<std::int64_t, std::int64_t> claim_sums(std::span<const std::int64_t> alpha,
                                                        std::int64_t B) {
  return {sum_positive(alpha), B + 1 + sum_positive(alpha, 1)};
}

// ---------------------------------------------------------------------------
// Certificates for rank(D) < r
// ---------------------------------------------------------------------------

struct RankDropWitness {
  /// 1: fire v_m A+1 times and remove E; 2: fire v_m A times and remove E
  /// (which then holds B+1 chips at v_m).
  int variant = 0;
  Divisor removed;
  /// D_i - E_i: v_m-reduced and negative at v_m.
  Divisor residual;
};

/// For a v_m-reduced D with D(v_m) >= 0, looks for an effective E of degree
/// <= r supported on v_m and the w-vertices such that D - E is equivalent to
/// a v_m-reduced divisor that is negative at v_m. Its existence shows
/// rank(D) < r.
inline std::optional<RankDropWitness> rank_drop_witness(std::int64_t m, std::int64_t n,
                                                        const Divisor& d, std::int64_t r) {
  const auto norm = normalize_order(m, n, d);
  const auto alpha = alpha_of(m, n, d, norm.order);
  const Multigraph g = complete_bipartite(static_cast<int>(m), static_cast<int>(n));
  const VertexId q = sink(m);

  auto fired = [&](std::int64_t times) {
    Divisor out = d;
    out[q] -= times * n;
    for (std::int64_t j = 1; j <= n; ++j) out[w_vertex(m, j)] += times;
    return out;
  };

  for (int variant = 1; variant <= 2; ++variant) {
    Divisor e(static_cast<std::size_t>(m + n));
    const std::int64_t shift = variant == 1 ? 0 : 1;
    for (std::size_t i = 0; i < norm.w_order.size(); ++i)
      e[norm.w_order[i]] = positive_part(alpha.values[i] - shift);
    if (variant == 2) e[q] = alpha.B + 1;
    if (e.degree() > r) continue;
    Divisor residual = fired(variant == 1 ? alpha.A + 1 : alpha.A) - e;
    ::chipfire::detail::ensure(residual[q] < 0, "residual must be negative at the sink");
    ::chipfire::detail::ensure(is_reduction_order(g, residual, q, norm.order),
                               "residual must be reduced for the same order");
    return RankDropWitness{variant, std::move(e), std::move(residual)};
  }
  return std::nullopt;
}

}  // namespace chipfire::kmn
