#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chipfire/error.hpp"
#include "chipfire/rational.hpp"

namespace chipfire {

using VertexId = std::size_t;
using Chips = std::int64_t;

// ---------------------------------------------------------------------------
// Multigraph
// ---------------------------------------------------------------------------

/// Loopless undirected multigraph with named vertices. Parallel edges are
/// stored as multiplicities; individual parallel edges are addressed by an
/// index in [0, multiplicity).
class Multigraph {
 public:
  struct Neighbor {
    VertexId vertex;
    int multiplicity;
  };

  Multigraph() = default;

  explicit Multigraph(const std::vector<std::string>& names) {
    for (const auto& name : names) add_vertex(name);
  }

  VertexId add_vertex(const std::string& name) {
    if (name.empty()) throw Error(Errc::invalid_parameter, "empty vertex name");
    if (index_.count(name)) throw Error(Errc::invalid_parameter, "duplicate vertex '" + name + "'");
    const VertexId id = names_.size();
    names_.push_back(name);
    index_.emplace(name, id);
    adjacency_.emplace_back();
    degree_.push_back(0);
    return id;
  }

  void add_edge(VertexId u, VertexId w, int multiplicity = 1) {
    check_vertex(u);
    check_vertex(w);
    if (u == w) throw Error(Errc::invalid_parameter, "loop at vertex '" + names_[u] + "'");
    if (multiplicity < 0) throw Error(Errc::invalid_parameter, "negative edge multiplicity");
    if (multiplicity == 0) return;
    bump(u, w, multiplicity);
    bump(w, u, multiplicity);
    degree_[u] += multiplicity;
    degree_[w] += multiplicity;
    num_edges_ += multiplicity;
  }

  void add_edge(const std::string& u, const std::string& w, int multiplicity = 1) {
    add_edge(at(u), at(w), multiplicity);
  }

  std::size_t num_vertices() const noexcept { return names_.size(); }
  std::int64_t num_edges() const noexcept { return num_edges_; }

  /// First Betti number |E| - |V| + 1 (meaningful for connected graphs).
  std::int64_t genus() const noexcept {
    return num_edges_ - static_cast<std::int64_t>(names_.size()) + 1;
  }

  int degree(VertexId v) const { return degree_.at(v); }

  int multiplicity(VertexId u, VertexId w) const {
    for (const auto& nb : adjacency_.at(u))
      if (nb.vertex == w) return nb.multiplicity;
    return 0;
  }

  /// Distinct neighbours of v in increasing vertex order.
  const std::vector<Neighbor>& neighbors(VertexId v) const { return adjacency_.at(v); }

  const std::string& name(VertexId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<VertexId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  VertexId at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(Errc::invalid_parameter, "unknown vertex '" + name + "'");
    return it->second;
  }

  bool contains(VertexId v) const noexcept { return v < names_.size(); }

  bool is_connected() const {
    if (names_.empty()) return true;
    std::vector<char> seen(names_.size(), 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const auto& nb : adjacency_[v]) {
        if (!seen[nb.vertex]) {
          seen[nb.vertex] = 1;
          ++count;
          stack.push_back(nb.vertex);
        }
      }
    }
    return count == names_.size();
  }

  void require_connected() const {
    if (!is_connected()) throw Error(Errc::invalid_parameter, "graph is not connected");
  }

  /// All edges as (u, w, multiplicity) with u < w, in lexicographic order.
  std::vector<std::tuple<VertexId, VertexId, int>> edges() const {
    std::vector<std::tuple<VertexId, VertexId, int>> out;
    for (VertexId u = 0; u < names_.size(); ++u)
      for (const auto& nb : adjacency_[u])
        if (u < nb.vertex) out.emplace_back(u, nb.vertex, nb.multiplicity);
    return out;
  }

  friend bool operator==(const Multigraph& x, const Multigraph& y) {
    return x.names_ == y.names_ && x.edges() == y.edges();
  }

 private:
  void check_vertex(VertexId v) const {
    if (v >= names_.size()) throw Error(Errc::invalid_parameter, "vertex index out of range");
  }

  void bump(VertexId from, VertexId to, int multiplicity) {
    auto& list = adjacency_[from];
    auto it = std::lower_bound(list.begin(), list.end(), to,
                               [](const Neighbor& nb, VertexId v) { return nb.vertex < v; });
    if (it != list.end() && it->vertex == to)
      it->multiplicity += multiplicity;
    else
      list.insert(it, Neighbor{to, multiplicity});
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<int> degree_;
  std::int64_t num_edges_ = 0;
};

// ---------------------------------------------------------------------------
// Divisor
// ---------------------------------------------------------------------------

/// Integer chip configuration indexed by vertex id.
class Divisor {
 public:
  Divisor() = default;
  explicit Divisor(std::size_t num_vertices) : chips_(num_vertices, 0) {}
  explicit Divisor(std::vector<Chips> chips) : chips_(std::move(chips)) {}

  static Divisor zero(const Multigraph& g) { return Divisor(g.num_vertices()); }

  static Divisor point(const Multigraph& g, VertexId v, Chips c = 1) {
    Divisor d(g.num_vertices());
    d.chips_.at(v) = c;
    return d;
  }

  std::size_t size() const noexcept { return chips_.size(); }
  Chips operator[](VertexId v) const { return chips_[v]; }
  Chips& operator[](VertexId v) { return chips_[v]; }
  std::span<const Chips> chips() const noexcept { return chips_; }

  Chips degree() const noexcept {
    Chips sum = 0;
    for (Chips c : chips_) sum += c;
    return sum;
  }

  bool is_effective() const noexcept {
    return std::all_of(chips_.begin(), chips_.end(), [](Chips c) { return c >= 0; });
  }

  bool is_effective_off(VertexId q) const noexcept {
    for (VertexId v = 0; v < chips_.size(); ++v)
      if (v != q && chips_[v] < 0) return false;
    return true;
  }

  bool is_zero() const noexcept {
    return std::all_of(chips_.begin(), chips_.end(), [](Chips c) { return c == 0; });
  }

  Divisor& operator+=(const Divisor& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < chips_.size(); ++i) chips_[i] += o.chips_[i];
    return *this;
  }
  Divisor& operator-=(const Divisor& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < chips_.size(); ++i) chips_[i] -= o.chips_[i];
    return *this;
  }
  friend Divisor operator+(Divisor x, const Divisor& y) { return x += y; }
  friend Divisor operator-(Divisor x, const Divisor& y) { return x -= y; }
  friend Divisor operator-(Divisor x) {
    for (auto& c : x.chips_) c = -c;
    return x;
  }
  friend Divisor operator*(Chips k, Divisor x) {
    for (auto& c : x.chips_) c *= k;
    return x;
  }

  friend bool operator==(const Divisor&, const Divisor&) = default;
  friend auto operator<=>(const Divisor&, const Divisor&) = default;

 private:
  void check_same_size(const Divisor& o) const {
    if (o.chips_.size() != chips_.size())
      throw Error(Errc::invalid_divisor, "divisors live on different vertex sets");
  }

  std::vector<Chips> chips_;
};

inline void require_on(const Multigraph& g, const Divisor& d) {
  if (d.size() != g.num_vertices())
    throw Error(Errc::invalid_divisor, "divisor has " + std::to_string(d.size()) +
                                           " entries but the graph has " +
                                           std::to_string(g.num_vertices()) + " vertices");
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// K_{m,n} with vertices v1..vm (ids 0..m-1) followed by w1..wn (ids m..m+n-1).
inline Multigraph complete_bipartite(int m, int n) {
  if (m < 1 || n < 1)
    throw Error(Errc::invalid_parameter, "complete_bipartite needs m, n >= 1");
  Multigraph g;
  for (int i = 1; i <= m; ++i) g.add_vertex("v" + std::to_string(i));
  for (int j = 1; j <= n; ++j) g.add_vertex("w" + std::to_string(j));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(m + j));
  return g;
}

/// K_d with vertices v1..vd.
inline Multigraph complete_graph(int d) {
  if (d < 1) throw Error(Errc::invalid_parameter, "complete_graph needs d >= 1");
  Multigraph g;
  for (int i = 1; i <= d; ++i) g.add_vertex("v" + std::to_string(i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
  return g;
}

// ---------------------------------------------------------------------------
// Firing
// ---------------------------------------------------------------------------

namespace detail {

// Fires the set marked in `in_set` `times` times, in place.
inline void fire_mask(const Multigraph& g, Divisor& d, const std::vector<char>& in_set,
                      Chips times = 1) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!in_set[v]) continue;
    for (const auto& nb : g.neighbors(v)) {
      if (in_set[nb.vertex]) continue;
      const Chips flow = times * nb.multiplicity;
      d[v] -= flow;
      d[nb.vertex] += flow;
    }
  }
}

inline std::vector<char> to_mask(const Multigraph& g, std::span<const VertexId> set) {
  std::vector<char> mask(g.num_vertices(), 0);
  for (VertexId v : set) {
    if (!g.contains(v)) throw Error(Errc::invalid_parameter, "firing set names an unknown vertex");
    mask[v] = 1;
  }
  return mask;
}

}  // namespace detail

/// Every vertex of `set` sends one chip along each edge leaving the set.
inline Divisor fire_set(const Multigraph& g, const Divisor& d, std::span<const VertexId> set) {
  require_on(g, d);
  Divisor out = d;
  detail::fire_mask(g, out, detail::to_mask(g, set));
  return out;
}

inline Divisor fire_set(const Multigraph& g, const Divisor& d, const std::vector<std::string>& set) {
  std::vector<VertexId> ids;
  ids.reserve(set.size());
  for (const auto& name : set) ids.push_back(g.at(name));
  return fire_set(g, d, ids);
}

/// The discrete canonical divisor K(v) = deg(v) - 2.
inline Divisor canonical_divisor(const Multigraph& g) {
  Divisor k(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) k[v] = g.degree(v) - 2;
  return k;
}

// ---------------------------------------------------------------------------
// Metric divisors on unit-length edges
// ---------------------------------------------------------------------------

/// One specific parallel edge. Stored with u < w.
struct EdgeRef {
  VertexId u = 0;
  VertexId w = 0;
  int index = 0;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/// Chips sitting at an interior point of an edge; `position` is measured from
/// `edge.u`.
struct EdgeChip {
  EdgeRef edge;
  Rational position;
  Chips chips = 0;

  friend bool operator==(const EdgeChip&, const EdgeChip&) = default;
};

class MetricDivisor {
 public:
  MetricDivisor() = default;

  /// Validates every interior point against `g`, orients edges so that u < w
  /// (flipping positions accordingly) and sorts points by (edge, position).
  MetricDivisor(const Multigraph& g, Divisor vertex_chips, std::vector<EdgeChip> points)
      : vertex_chips_(std::move(vertex_chips)), points_(std::move(points)) {
    require_on(g, vertex_chips_);
    for (auto& p : points_) {
      if (!g.contains(p.edge.u) || !g.contains(p.edge.w))
        throw Error(Errc::invalid_divisor, "interior point on an unknown edge");
      if (!p.position.in_open_unit_interval())
        throw Error(Errc::invalid_divisor, "interior position " + p.position.str() +
                                               " is not strictly between 0 and 1");
      if (p.edge.u > p.edge.w) {
        std::swap(p.edge.u, p.edge.w);
        p.position = p.position.complement();
      }
      const int mult = g.multiplicity(p.edge.u, p.edge.w);
      if (p.edge.index < 0 || p.edge.index >= mult)
        throw Error(Errc::invalid_divisor, "edge " + g.name(p.edge.u) + "-" + g.name(p.edge.w) +
                                               "[" + std::to_string(p.edge.index) +
                                               "] does not exist");
    }
    std::sort(points_.begin(), points_.end(), [](const EdgeChip& x, const EdgeChip& y) {
      return std::tie(x.edge, x.position) < std::tie(y.edge, y.position);
    });
    for (std::size_t i = 1; i < points_.size(); ++i)
      if (points_[i].edge == points_[i - 1].edge && points_[i].position == points_[i - 1].position)
        throw Error(Errc::invalid_divisor, "two chip entries at the same interior point");
  }

  explicit MetricDivisor(Divisor vertex_chips) : vertex_chips_(std::move(vertex_chips)) {}

  const Divisor& vertex_chips() const noexcept { return vertex_chips_; }
  const std::vector<EdgeChip>& points() const noexcept { return points_; }

  Chips degree() const noexcept {
    Chips sum = vertex_chips_.degree();
    for (const auto& p : points_) sum += p.chips;
    return sum;
  }

  /// Copy with zero-chip interior points removed.
  MetricDivisor without_empty_points() const {
    MetricDivisor out;
    out.vertex_chips_ = vertex_chips_;
    for (const auto& p : points_)
      if (p.chips != 0) out.points_.push_back(p);
    return out;
  }

  /// Sum of interior chips on each parallel edge that carries any point.
  std::map<EdgeRef, Chips> interior_sums() const {
    std::map<EdgeRef, Chips> sums;
    for (const auto& p : points_) sums[p.edge] += p.chips;
    return sums;
  }

 private:
  Divisor vertex_chips_;
  std::vector<EdgeChip> points_;
};

/// Result of turning every interior point into a degree-2 vertex.
struct Subdivision {
  Multigraph graph;
  Divisor divisor;
  /// points[i] is the original location of vertex (original |V| + i).
  std::vector<std::pair<EdgeRef, Rational>> points;
};

inline std::string point_name(const Multigraph& g, const EdgeRef& e, const Rational& pos) {
  return g.name(e.u) + "-" + g.name(e.w) + "[" + std::to_string(e.index) + "]@" + pos.str();
}

/// Original vertices keep their ids; new vertices follow in (edge, position)
/// order.
inline Subdivision subdivide(const Multigraph& g, const MetricDivisor& d) {
  Subdivision out;
  out.graph = Multigraph(g.names());

  // Group the points by parallel edge; points() is already sorted.
  std::map<EdgeRef, std::vector<const EdgeChip*>> by_edge;
  for (const auto& p : d.points()) by_edge[p.edge].push_back(&p);

  std::vector<Chips> chips(d.vertex_chips().chips().begin(), d.vertex_chips().chips().end());
  for (const auto& [u, w, mult] : g.edges()) {
    int plain = mult;
    for (int k = 0; k < mult; ++k) {
      auto it = by_edge.find(EdgeRef{u, w, k});
      if (it == by_edge.end()) continue;
      --plain;
      VertexId prev = u;
      for (const EdgeChip* p : it->second) {
        const VertexId id = out.graph.add_vertex(point_name(g, p->edge, p->position));
        out.points.emplace_back(p->edge, p->position);
        chips.push_back(p->chips);
        out.graph.add_edge(prev, id);
        prev = id;
      }
      out.graph.add_edge(prev, w);
    }
    out.graph.add_edge(u, w, plain);
  }
  out.divisor = Divisor(std::move(chips));
  return out;
}

}  // namespace chipfire
