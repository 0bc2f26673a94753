#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "chipfire/error.hpp"
#include "chipfire/graph.hpp"

namespace chipfire {

/// A boundary vertex of the unburnt set together with the data showing it is
/// saturated: chips >= outdeg.
struct BoundaryWitness {
  VertexId vertex;
  Chips outdeg;
  Chips chips;
};

struct BurnResult {
  /// Unburnt vertices in increasing id order; empty iff the divisor is reduced.
  std::vector<VertexId> unburnt;
  std::vector<BoundaryWitness> boundary;
  /// Vertices in the order the fire reached them, starting with the sink.
  std::vector<VertexId> burn_order;

  bool all_burnt() const noexcept { return unburnt.empty(); }
};

/// `times` copies of firing `set`.
struct FiringStep {
  std::vector<VertexId> set;
  Chips times = 1;

  friend bool operator==(const FiringStep&, const FiringStep&) = default;
};

struct ReductionCertificate {
  Divisor reduced;
  std::vector<FiringStep> script;
  /// Greedy reduction order of `reduced`, starting at the sink.
  std::vector<VertexId> order;
};

namespace detail {

struct BurnState {
  std::vector<char> burnt;
  std::vector<Chips> burnt_edges;
  std::vector<VertexId> order;
};

// Work-queue fixpoint. Vertices are reached in FIFO order and neighbours are
// scanned in increasing id, so the outcome is reproducible.
inline void burn_into(const Multigraph& g, const Divisor& d, VertexId q, BurnState& st) {
  const std::size_t n = g.num_vertices();
  st.burnt.assign(n, 0);
  st.burnt_edges.assign(n, 0);
  st.order.clear();
  st.order.reserve(n);
  st.burnt[q] = 1;
  st.order.push_back(q);
  for (std::size_t head = 0; head < st.order.size(); ++head) {
    const VertexId v = st.order[head];
    for (const auto& nb : g.neighbors(v)) {
      const VertexId u = nb.vertex;
      if (st.burnt[u]) continue;
      st.burnt_edges[u] += nb.multiplicity;
      if (st.burnt_edges[u] > d[u]) {
        st.burnt[u] = 1;
        st.order.push_back(u);
      }
    }
  }
}

inline void require_sink(const Multigraph& g, VertexId q) {
  if (!g.contains(q)) throw Error(Errc::invalid_parameter, "sink vertex out of range");
}

}  // namespace detail

/// Dhar's burning algorithm started at q. Requires D >= 0 away from q.
inline BurnResult burn(const Multigraph& g, const Divisor& d, VertexId q) {
  require_on(g, d);
  detail::require_sink(g, q);
  if (!d.is_effective_off(q))
    throw Error(Errc::invalid_divisor, "burning needs a divisor that is nonnegative off the sink");

  detail::BurnState st;
  detail::burn_into(g, d, q, st);

  BurnResult out;
  out.burn_order = st.order;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (st.burnt[v]) continue;
    out.unburnt.push_back(v);
    if (st.burnt_edges[v] > 0) out.boundary.push_back({v, st.burnt_edges[v], d[v]});
  }
  return out;
}

inline bool is_reduced(const Multigraph& g, const Divisor& d, VertexId q) {
  require_on(g, d);
  detail::require_sink(g, q);
  if (!d.is_effective_off(q)) return false;
  detail::BurnState st;
  detail::burn_into(g, d, q, st);
  return st.order.size() == g.num_vertices();
}

inline Divisor replay_script(const Multigraph& g, const Divisor& d,
                             std::span<const FiringStep> script) {
  require_on(g, d);
  Divisor out = d;
  for (const auto& step : script)
    detail::fire_mask(g, out, detail::to_mask(g, step.set), step.times);
  return out;
}

// ---------------------------------------------------------------------------
// Reducedness characterization via a total order of the vertices
// ---------------------------------------------------------------------------

/// Per-vertex values for a given order: `weight` is the vertex chips plus the
/// interior chips on edges towards earlier vertices, `earlier_edges` counts
/// edges towards earlier vertices.
struct OrderValues {
  std::vector<Chips> weight;
  std::vector<Chips> earlier_edges;
};

namespace detail {

// Number of parallel edges between each pair that carry one interior chip.
inline std::map<std::pair<VertexId, VertexId>, Chips> marked_edges(const MetricDivisor& d) {
  std::map<std::pair<VertexId, VertexId>, Chips> marked;
  for (const auto& [edge, sum] : d.interior_sums())
    if (sum != 0) marked[{edge.u, edge.w}] += 1;
  return marked;
}

inline Chips marked_between(const std::map<std::pair<VertexId, VertexId>, Chips>& marked,
                            VertexId x, VertexId y) {
  auto it = marked.find({std::min(x, y), std::max(x, y)});
  return it == marked.end() ? 0 : it->second;
}

inline std::vector<char> order_mask(const Multigraph& g, std::span<const VertexId> order) {
  std::vector<char> seen(g.num_vertices(), 0);
  if (order.size() != g.num_vertices())
    throw Error(Errc::invalid_input, "order does not list every vertex exactly once");
  for (VertexId v : order) {
    if (!g.contains(v) || seen[v])
      throw Error(Errc::invalid_input, "order does not list every vertex exactly once");
    seen[v] = 1;
  }
  return seen;
}

}  // namespace detail

/// Values of the order conditions for a divisor whose interior chips are 0/1
/// per edge. Interior chips are counted once per marked parallel edge.
inline OrderValues order_values(const Multigraph& g, const MetricDivisor& d,
                                std::span<const VertexId> order) {
  detail::order_mask(g, order);
  const auto clean = d.without_empty_points();
  const auto marked = detail::marked_edges(clean);
  OrderValues out{std::vector<Chips>(g.num_vertices(), 0),
                  std::vector<Chips>(g.num_vertices(), 0)};
  std::vector<char> placed(g.num_vertices(), 0);
  for (VertexId v : order) {
    out.weight[v] = clean.vertex_chips()[v];
    for (const auto& nb : g.neighbors(v)) {
      if (!placed[nb.vertex]) continue;
      out.earlier_edges[v] += nb.multiplicity;
      out.weight[v] += detail::marked_between(marked, v, nb.vertex);
    }
    placed[v] = 1;
  }
  return out;
}

inline OrderValues order_values(const Multigraph& g, const Divisor& d,
                                std::span<const VertexId> order) {
  return order_values(g, MetricDivisor(d), order);
}

namespace detail {

// Pointwise part of reducedness: nonnegative off q, at most one interior
// chip per parallel edge.
inline bool pointwise_conditions(const MetricDivisor& d, VertexId q) {
  if (!d.vertex_chips().is_effective_off(q)) return false;
  for (const auto& p : d.points())
    if (p.chips < 0) return false;
  for (const auto& [edge, sum] : d.interior_sums())
    if (sum > 1) return false;
  return true;
}

}  // namespace detail

/// True when `order` starts at q and every later vertex has weight strictly
/// below its number of earlier edges, on top of the pointwise conditions.
inline bool is_reduction_order(const Multigraph& g, const MetricDivisor& d, VertexId q,
                               std::span<const VertexId> order) {
  detail::require_sink(g, q);
  const auto clean = d.without_empty_points();
  if (!detail::pointwise_conditions(clean, q)) return false;
  if (order.empty() || order.front() != q) return false;
  const auto values = order_values(g, clean, order);
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (v != q && values.weight[v] >= values.earlier_edges[v]) return false;
  return true;
}

inline bool is_reduction_order(const Multigraph& g, const Divisor& d, VertexId q,
                               std::span<const VertexId> order) {
  return is_reduction_order(g, MetricDivisor(d), q, order);
}

/// Decides q-reducedness of a metric divisor on unit edges without
/// subdividing. Returns the greedy certificate order when reduced: the next
/// vertex is always a burnable one of minimal weight, ties going to the lower
/// vertex id.
inline std::optional<std::vector<VertexId>> find_reduction_order(const Multigraph& g,
                                                                 const MetricDivisor& d,
                                                                 VertexId q) {
  require_on(g, d.vertex_chips());
  detail::require_sink(g, q);
  const auto clean = d.without_empty_points();
  if (!detail::pointwise_conditions(clean, q)) return std::nullopt;

  const auto marked = detail::marked_edges(clean);
  const std::size_t n = g.num_vertices();
  std::vector<Chips> weight(n), earlier(n, 0);
  for (VertexId v = 0; v < n; ++v) weight[v] = clean.vertex_chips()[v];
  std::vector<char> placed(n, 0);

  std::vector<VertexId> order;
  order.reserve(n);
  auto place = [&](VertexId v) {
    placed[v] = 1;
    order.push_back(v);
    for (const auto& nb : g.neighbors(v)) {
      if (placed[nb.vertex]) continue;
      earlier[nb.vertex] += nb.multiplicity;
      weight[nb.vertex] += detail::marked_between(marked, v, nb.vertex);
    }
  };

  place(q);
  while (order.size() < n) {
    std::optional<VertexId> best;
    for (VertexId v = 0; v < n; ++v) {
      if (placed[v] || weight[v] >= earlier[v]) continue;
      if (!best || weight[v] < weight[*best]) best = v;
    }
    if (!best) return std::nullopt;
    place(*best);
  }
  return order;
}

inline std::optional<std::vector<VertexId>> find_reduction_order(const Multigraph& g,
                                                                 const Divisor& d, VertexId q) {
  return find_reduction_order(g, MetricDivisor(d), q);
}

/// Oracle for find_reduction_order: subdivide every interior point and burn.
inline bool metric_is_reduced(const Multigraph& g, const MetricDivisor& d, VertexId q) {
  require_on(g, d.vertex_chips());
  detail::require_sink(g, q);
  const auto sub = subdivide(g, d);
  return is_reduced(sub.graph, sub.divisor, q);
}

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

namespace detail {

// Makes d nonnegative away from q. With BFS layers L_0 = {q}, L_1, ..., firing
// T_k = L_0 ∪ ... ∪ L_{k-1} only moves chips from L_{k-1} to L_k, so the
// layers can be fixed from the outside in.
class Reducer {
 public:
  Reducer(const Multigraph& g, VertexId q) : g_(g), q_(q) {
    require_sink(g, q);
    const std::size_t n = g.num_vertices();
    constexpr std::size_t unreached = std::numeric_limits<std::size_t>::max();
    dist_.assign(n, unreached);
    std::vector<VertexId> bfs{q};
    dist_[q] = 0;
    for (std::size_t head = 0; head < bfs.size(); ++head)
      for (const auto& nb : g.neighbors(bfs[head]))
        if (dist_[nb.vertex] == unreached) {
          dist_[nb.vertex] = dist_[bfs[head]] + 1;
          bfs.push_back(nb.vertex);
        }
    if (bfs.size() != n) throw Error(Errc::invalid_parameter, "graph is not connected");
    depth_ = dist_[bfs.back()];
    inward_.assign(n, 0);
    for (VertexId u = 0; u < n; ++u)
      for (const auto& nb : g.neighbors(u))
        if (dist_[nb.vertex] + 1 == dist_[u]) inward_[u] += nb.multiplicity;
    mask_.assign(n, 0);
  }

  /// Replaces d by its q-reduced form; appends the firings to `script` when
  /// given.
  void run(Divisor& d, std::vector<FiringStep>* script = nullptr) {
    make_effective_off(d, script);
    const std::size_t n = g_.num_vertices();
    for (;;) {
      burn_into(g_, d, q_, st_);
      if (st_.order.size() == n) return;

      Chips times = std::numeric_limits<Chips>::max();
      for (VertexId v = 0; v < n; ++v) {
        mask_[v] = st_.burnt[v] ? 0 : 1;
        if (mask_[v] && st_.burnt_edges[v] > 0) times = std::min(times, d[v] / st_.burnt_edges[v]);
      }
      ensure(times >= 1, "unburnt set must be saturated on its boundary");
      fire_mask(g_, d, mask_, times);
      if (script) script->push_back(step_from_mask(times));
    }
  }

 private:
  void make_effective_off(Divisor& d, std::vector<FiringStep>* script) {
    const std::size_t n = g_.num_vertices();
    for (std::size_t k = depth_; k >= 1; --k) {
      Chips times = 0;
      for (VertexId u = 0; u < n; ++u)
        if (dist_[u] == k && d[u] < 0)
          times = std::max(times, (-d[u] + inward_[u] - 1) / inward_[u]);
      if (times == 0) continue;
      for (VertexId v = 0; v < n; ++v) mask_[v] = dist_[v] < k ? 1 : 0;
      fire_mask(g_, d, mask_, times);
      if (script) script->push_back(step_from_mask(times));
    }
  }

  FiringStep step_from_mask(Chips times) const {
    FiringStep step{{}, times};
    for (VertexId v = 0; v < mask_.size(); ++v)
      if (mask_[v]) step.set.push_back(v);
    return step;
  }

  const Multigraph& g_;
  VertexId q_;
  std::vector<std::size_t> dist_;
  std::vector<Chips> inward_;
  std::size_t depth_ = 0;
  BurnState st_;
  std::vector<char> mask_;
};

}  // namespace detail

/// Computes the q-reduced divisor equivalent to d: first make d effective off
/// q, then repeatedly fire the unburnt set (as many times as it stays
/// effective) until everything burns.
inline ReductionCertificate reduce(const Multigraph& g, const Divisor& d, VertexId q) {
  require_on(g, d);
  ReductionCertificate cert;
  cert.reduced = d;
  detail::Reducer(g, q).run(cert.reduced, &cert.script);
  auto order = find_reduction_order(g, cert.reduced, q);
  detail::ensure(order.has_value(), "reduced divisor must admit a reduction order");
  cert.order = std::move(*order);
  return cert;
}

/// Reduced divisor only, skipping the certificate bookkeeping.
inline Divisor reduced_form(const Multigraph& g, const Divisor& d, VertexId q) {
  require_on(g, d);
  Divisor out = d;
  detail::Reducer(g, q).run(out);
  return out;
}

}  // namespace chipfire
