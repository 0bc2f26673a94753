#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chipfire/dhar.hpp"
#include "chipfire/error.hpp"
#include "chipfire/gonality.hpp"
#include "chipfire/graph.hpp"
#include "chipfire/kmn.hpp"
#include "chipfire/rank.hpp"
#include "chipfire/rational.hpp"

// Parameter sweeps behind `chipfire verify`. Every suite is deterministic for
// a given (max, seed) and emits its rows in a fixed order.

namespace chipfire::verify {

using Cell = std::variant<std::int64_t, bool, std::string>;

struct SuiteReport {
  std::string suite;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  /// Human-readable description of the first few failures.
  std::vector<std::string> notes;

  bool ok() const noexcept { return failures == 0; }

  void fail(std::string note) {
    ++failures;
    if (notes.size() < 20) notes.push_back(std::move(note));
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"claim", "worstcase", "theorem3", "riemann-roch", "dst"};
  return names;
}

// ---------------------------------------------------------------------------
// Claim tuples
// ---------------------------------------------------------------------------

/// Every (m, n, a, b, h, A, B) with 2 <= m, n <= max, (a, b, h) an optimal
/// triple for some 0 < r < g, 0 <= B < n, and A >= 0 such that an alpha
/// sequence with these bounds and this sum exists.
inline std::vector<kmn::KmnParams> claim_tuples(std::int64_t max) {
  std::vector<kmn::KmnParams> out;
  for (std::int64_t m = 2; m <= max; ++m)
    for (std::int64_t n = 2; n <= max; ++n) {
      const std::int64_t g = (m - 1) * (n - 1);
      for (std::int64_t r = 1; r < g; ++r)
        for (const auto& t : optimal_triples(m, n, r))
          for (std::int64_t B = 0; B < n; ++B)
            for (std::int64_t A = 0;; ++A) {
              const kmn::KmnParams p{m, n, t.a, t.b, t.h, A, B};
              // alpha_sum does not depend on A while n(A+2-m) grows with it.
              if (n * p.lower() > p.alpha_sum()) break;
              if (p.feasible()) out.push_back(p);
            }
    }
  return out;
}

/// A random sequence meeting the bounds [A+2-m, A+1] and the required sum:
/// start from the lower bound and hand out the excess one unit at a time to
/// random entries that still have room.
template <class Rng>
std::vector<std::int64_t> random_alpha(const kmn::KmnParams& p, Rng& rng) {
  ::chipfire::detail::ensure(p.feasible(), "alpha sequence requested for infeasible parameters");
  std::vector<std::int64_t> alpha(static_cast<std::size_t>(p.n), p.lower());
  std::int64_t excess = p.alpha_sum() - p.n * p.lower();
  std::vector<std::size_t> open(alpha.size());
  std::iota(open.begin(), open.end(), std::size_t{0});
  while (excess > 0) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const std::size_t k = pick(rng);
    if (++alpha[open[k]] == p.upper()) {
      open[k] = open.back();
      open.pop_back();
    }
    --excess;
  }
  return alpha;
}

inline SuiteReport claim_suite(std::int64_t max) {
  SuiteReport rep;
  rep.suite = "claim";
  rep.columns = {"m", "n", "a", "b", "h", "A", "B", "t1", "t2", "r", "holds"};
  for (const auto& p : claim_tuples(max)) {
    const auto res = kmn::verify_claim(p);
    ++rep.checked;
    rep.rows.push_back({p.m, p.n, p.a, p.b, p.h, p.A, p.B, res.t1, res.t2, res.r, res.holds});
    if (!res.holds)
      rep.fail("claim fails at m=" + std::to_string(p.m) + " n=" + std::to_string(p.n) +
               " a=" + std::to_string(p.a) + " b=" + std::to_string(p.b) + " h=" +
               std::to_string(p.h) + " A=" + std::to_string(p.A) + " B=" + std::to_string(p.B));
  }
  return rep;
}

/// For each claim tuple, `samples` random alpha sequences: the extremal
/// sequence must dominate them (when A+2-m <= 0) and min(t1, t2) <= r must
/// hold for them directly.
inline SuiteReport worstcase_suite(std::int64_t max, std::uint64_t seed, std::int64_t samples = 1000) {
  SuiteReport rep;
  rep.suite = "worstcase";
  rep.columns = {"m", "n", "a", "b", "h", "A", "B", "samples", "violations"};
  std::mt19937_64 rng(seed);
  for (const auto& p : claim_tuples(max)) {
    std::optional<kmn::BetaSequence> beta;
    if (p.lower() <= 0) beta = kmn::beta_of(p);
    std::int64_t bad = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
      const auto alpha = random_alpha(p, rng);
      ++rep.checked;
      const auto [t1, t2] = kmn::claim_sums(alpha, p.B);
      const bool ok = std::min(t1, t2) <= p.r() && (!beta || kmn::worstcase_dominates(alpha, *beta));
      if (!ok) ++bad;
    }
    rep.rows.push_back({p.m, p.n, p.a, p.b, p.h, p.A, p.B, samples, bad});
    if (bad > 0)
      rep.fail(std::to_string(bad) + " sequences violate the bound at m=" + std::to_string(p.m) +
               " n=" + std::to_string(p.n) + " a=" + std::to_string(p.a) + " b=" +
               std::to_string(p.b) + " A=" + std::to_string(p.A) + " B=" + std::to_string(p.B));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Small multigraphs
// ---------------------------------------------------------------------------

namespace detail {

// Multiplicities indexed by the pairs (i, j), i < j, in row-major order.
inline std::vector<int> permuted(const std::vector<int>& mult, const std::vector<int>& perm) {
  const std::size_t n = perm.size();
  std::vector<int> out(mult.size());
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> index(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) index[i][j] = index[j][i] = k++;
  k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out[index[perm[i]][perm[j]]] = mult[k++];
  return out;
}

inline Multigraph graph_from_pairs(std::size_t n, const std::vector<int>& mult) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  Multigraph g(names);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j, mult[k++]);
  return g;
}

}  // namespace detail

/// Connected loopless multigraphs with 1..max_vertices vertices and at most
/// max_edges edges, one per isomorphism class, ordered by (vertices, edges,
/// canonical multiplicity vector).
inline std::vector<Multigraph> connected_multigraphs(std::size_t max_vertices, int max_edges) {
  std::vector<Multigraph> out;
  for (std::size_t n = 1; n <= max_vertices; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    std::vector<int> perm(n);
    std::set<std::pair<int, std::vector<int>>> seen;
    std::vector<int> mult(pairs, 0);
    // Odometer over multiplicity vectors with total <= max_edges.
    auto visit = [&] {
      const int total = std::accumulate(mult.begin(), mult.end(), 0);
      if (total + 1 < static_cast<int>(n)) return;
      if (!detail::graph_from_pairs(n, mult).is_connected()) return;
      std::vector<int> best;
      std::iota(perm.begin(), perm.end(), 0);
      do {
        auto cand = detail::permuted(mult, perm);
        if (best.empty() || cand > best) best = std::move(cand);
      } while (std::next_permutation(perm.begin(), perm.end()));
      seen.emplace(total, std::move(best));
    };
    int total = 0;
    for (;;) {
      visit();
      std::size_t i = 0;
      for (; i < pairs; ++i) {
        if (total < max_edges) {
          ++mult[i];
          ++total;
          break;
        }
        total -= mult[i];
        mult[i] = 0;
      }
      if (i == pairs) break;
    }
    for (const auto& [edges, canon] : seen) out.push_back(detail::graph_from_pairs(n, canon));
  }
  return out;
}

/// A random metric divisor on g: at most three interior points with positive
/// chips, at most two interior chips per parallel edge, vertex chips mostly in
/// [0, deg(v)] with occasional negatives, total degree at most 6.
template <class Rng>
MetricDivisor random_metric_divisor(const Multigraph& g, Rng& rng) {
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  std::vector<EdgeRef> edges;
  for (const auto& [u, w, mult] : g.edges())
    for (int k = 0; k < mult; ++k) edges.push_back(EdgeRef{u, w, k});

  for (;;) {
    std::vector<EdgeChip> points;
    std::map<EdgeRef, Chips> on_edge;
    const std::int64_t count = edges.empty() ? 0 : uniform(0, 3);
    for (std::int64_t i = 0; i < count; ++i) {
      const EdgeRef e = edges[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(edges.size()) - 1))];
      const std::int64_t den = uniform(2, 4);
      const Rational pos(uniform(1, den - 1), den);
      const Chips chips = uniform(1, 2);
      if (on_edge[e] + chips > 2) continue;
      const bool clash = std::any_of(points.begin(), points.end(), [&](const EdgeChip& p) {
        return p.edge == e && p.position == pos;
      });
      if (clash) continue;
      on_edge[e] += chips;
      points.push_back(EdgeChip{e, pos, chips});
    }
    Divisor d = Divisor::zero(g);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      d[v] = uniform(0, 9) == 0 ? -1 : uniform(0, std::max(g.degree(v), 1));
    MetricDivisor md(g, std::move(d), std::move(points));
    if (md.degree() <= 6) return md;
  }
}

/// Order characterization against Dhar burning on the subdivided graph, for
/// every small connected multigraph and `samples` random metric divisors each
/// (the sink is drawn at random too). Vertex-supported samples are also
/// compared with is_reduced on the graph itself.
inline SuiteReport order_characterization_suite(std::int64_t max_vertices, std::uint64_t seed,
                                  std::int64_t samples = 200, int max_edges = 7) {
  SuiteReport rep;
  rep.suite = "theorem3";
  rep.columns = {"vertices", "edges", "samples", "reduced", "vertex_supported", "mismatches"};
  std::mt19937_64 rng(seed);
  for (const auto& g : connected_multigraphs(static_cast<std::size_t>(max_vertices), max_edges)) {
    std::int64_t reduced = 0, vertex_only = 0, bad = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
      const VertexId q = std::uniform_int_distribution<VertexId>(0, g.num_vertices() - 1)(rng);
      const auto md = random_metric_divisor(g, rng);
      const auto order = find_reduction_order(g, md, q);
      const bool burnt = metric_is_reduced(g, md, q);
      bool ok = order.has_value() == burnt;
      if (order) ok = ok && is_reduction_order(g, md, q, *order);
      if (md.points().empty()) {
        ++vertex_only;
        ok = ok && is_reduced(g, md.vertex_chips(), q) == burnt;
      }
      reduced += burnt ? 1 : 0;
      ++rep.checked;
      if (!ok) {
        ++bad;
        rep.fail("order characterization disagrees with burning on a graph with " +
                 std::to_string(g.num_vertices()) + " vertices, " + std::to_string(g.num_edges()) +
                 " edges");
      }
    }
    rep.rows.push_back({static_cast<std::int64_t>(g.num_vertices()), g.num_edges(), samples, reduced,
                        vertex_only, bad});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Riemann-Roch
// ---------------------------------------------------------------------------

/// A random divisor on g with the given degree: small random entries, with
/// the first vertex absorbing the difference.
template <class Rng>
Divisor random_divisor_of_degree(const Multigraph& g, Chips degree, Rng& rng) {
  Divisor d = Divisor::zero(g);
  std::uniform_int_distribution<Chips> entry(-1, 3);
  for (VertexId v = 1; v < g.num_vertices(); ++v) d[v] = entry(rng);
  d[0] = degree - d.degree();
  return d;
}

/// rank(D) - rank(K - D) = deg(D) - g + 1 for `samples` divisors of degree in
/// [-1, 2g] on g.
inline void riemann_roch_on(const Multigraph& g, const std::string& label, std::uint64_t seed,
                            std::int64_t samples, SuiteReport& rep) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Chips> degree(-1, 2 * g.genus());
  std::int64_t bad = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Divisor d = random_divisor_of_degree(g, degree(rng), rng);
    ++rep.checked;
    if (!riemann_roch_check(g, d, budget_from_env())) {
      ++bad;
      rep.fail("Riemann-Roch fails on " + label);
    }
  }
  rep.rows.push_back({label, samples, bad});
}

/// K_{m,n} for 2 <= m <= n and m + n <= max.
inline SuiteReport riemann_roch_suite(std::int64_t max, std::uint64_t seed, std::int64_t samples = 500) {
  SuiteReport rep;
  rep.suite = "riemann-roch";
  rep.columns = {"graph", "samples", "failures"};
  for (std::int64_t m = 2; m <= max; ++m)
    for (std::int64_t n = m; m + n <= max; ++n)
      riemann_roch_on(complete_bipartite(static_cast<int>(m), static_cast<int>(n)),
                      "kmn:" + std::to_string(m) + "," + std::to_string(n), seed, samples, rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Step-counting rank on K_{m,n}
// ---------------------------------------------------------------------------

/// Compares the step-counting trace of b*sum(v) + a*sum(w) with the closed
/// forms, for 2 <= m, n <= max, 0 <= a <= m-1, 0 <= b <= n-1. The trace after
/// the k-th subtraction (k = t(b+1) + s) must be equivalent to D_{s,t}, and
/// every step but the last must already be reduced.
inline SuiteReport dst_suite(std::int64_t max) {
  SuiteReport rep;
  rep.suite = "dst";
  rep.columns = {"m", "n", "a", "b", "steps", "rank", "expected", "mismatches"};
  for (std::int64_t m = 2; m <= max; ++m)
    for (std::int64_t n = 2; n <= max; ++n) {
      const Multigraph g = complete_bipartite(static_cast<int>(m), static_cast<int>(n));
      for (std::int64_t a = 0; a <= m - 1; ++a)
        for (std::int64_t b = 0; b <= n - 1; ++b) {
          const auto res = kmn::dlb_rank(m, n, a, b);
          const std::int64_t expected = (a + 1) * (b + 1) - 1;
          std::int64_t bad = res.rank == expected ? 0 : 1;
          for (std::size_t k = 1; k < res.trace.size(); ++k) {
            const std::int64_t t = static_cast<std::int64_t>(k - 1) / (b + 1);
            const std::int64_t s = static_cast<std::int64_t>(k - 1) % (b + 1) + 1;
            if (t > a) {
              ++bad;
              break;
            }
            const Divisor closed = kmn::dst_closed_form(m, n, a, b, s, t);
            const bool terminal = k + 1 == res.trace.size();
            ++rep.checked;
            if (reduced_form(g, closed, kmn::sink(m)) != res.trace[k]) ++bad;
            else if (!terminal && closed != res.trace[k]) ++bad;
          }
          rep.rows.push_back({m, n, a, b, static_cast<std::int64_t>(res.steps()), res.rank, expected, bad});
          if (bad > 0)
            rep.fail("trace and closed forms disagree at m=" + std::to_string(m) + " n=" +
                     std::to_string(n) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
        }
    }
  return rep;
}

/// Dispatch by suite name; `max` and `seed` mean what each suite documents.
inline SuiteReport run_suite(const std::string& name, std::int64_t max, std::uint64_t seed) {
  if (max < 2) throw Error(Errc::invalid_parameter, "--max must be at least 2");
  if (name == "claim") return claim_suite(max);
  if (name == "worstcase") return worstcase_suite(max, seed);
  if (name == "theorem3") return order_characterization_suite(max, seed);
  if (name == "riemann-roch") return riemann_roch_suite(max, seed);
  if (name == "dst") return dst_suite(max);
  throw Error(Errc::invalid_parameter, "unknown suite '" + name + "'");
}

}  // namespace chipfire::verify
