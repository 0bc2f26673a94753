#pragma once

// Slow, independent reference implementations used by the tests. None of them
// calls the burning algorithm or the reduction loop.

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "chipfire/graph.hpp"

namespace oracle {

using chipfire::Chips;
using chipfire::Divisor;
using chipfire::Multigraph;
using chipfire::VertexId;
// Compare through numerator(): boost 1.74 mixed rational/int comparisons
// recurse forever under the C++20 rewritten-operator rules.
using Q = boost::rational<std::int64_t>;
using Matrix = std::vector<std::vector<Q>>;

/// Laplacian with row and column q removed.
inline Matrix reduced_laplacian(const Multigraph& g, VertexId q) {
  std::vector<VertexId> keep;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (v != q) keep.push_back(v);
  Matrix m(keep.size(), std::vector<Q>(keep.size(), Q(0)));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      m[i][j] = i == j ? Q(g.degree(keep[i])) : Q(-g.multiplicity(keep[i], keep[j]));
  return m;
}

/// Determinant by exact Gaussian elimination.
inline Q determinant(Matrix a) {
  const std::size_t n = a.size();
  Q det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].numerator() == 0) ++p;
    if (p == n) return Q(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Q f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

inline Matrix inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Q>(n, Q(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].numerator() == 0) ++p;
    if (p == n) throw std::runtime_error("singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Q pivot = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= pivot;
      inv[c][k] /= pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].numerator() == 0) continue;
      const Q f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

/// Number of spanning trees (matrix-tree theorem).
inline std::int64_t spanning_trees(const Multigraph& g) {
  if (g.num_vertices() <= 1) return 1;
  const Q det = determinant(reduced_laplacian(g, 0));
  if (det.denominator() != 1) throw std::logic_error("non-integral determinant");
  return det.numerator();
}

/// Linear equivalence classes via the reduced Laplacian: D ~ D' iff they have
/// the same degree and L^{-1}(D - D') restricted off q is integral. The key
/// of D is its degree plus L^{-1} D reduced modulo 1.
class Classes {
 public:
  Classes(const Multigraph& g, VertexId q) : g_(g), q_(q), inv_(inverse(reduced_laplacian(g, q))) {}

  std::pair<Chips, std::vector<Q>> key(const Divisor& d) const {
    std::vector<Q> x;
    std::size_t row = 0;
    for (VertexId i = 0; i < g_.num_vertices(); ++i) {
      if (i == q_) continue;
      Q sum(0);
      std::size_t col = 0;
      for (VertexId j = 0; j < g_.num_vertices(); ++j) {
        if (j == q_) continue;
        sum += inv_[row][col] * d[j];
        ++col;
      }
      // Fractional part in [0, 1).
      std::int64_t whole = sum.numerator() / sum.denominator();
      if (sum.numerator() < 0 && sum.numerator() % sum.denominator() != 0) --whole;
      x.push_back(sum - whole);
      ++row;
    }
    return {d.degree(), std::move(x)};
  }

  bool equivalent(const Divisor& a, const Divisor& b) const { return key(a) == key(b); }

 private:
  const Multigraph& g_;
  VertexId q_;
  Matrix inv_;
};

/// Every effective divisor of degree d on n vertices.
inline std::vector<Divisor> effective_divisors(std::size_t n, Chips d) {
  std::vector<Divisor> out;
  if (d < 0) return out;
  Divisor cur(n);
  auto rec = [&](auto&& self, std::size_t i, Chips left) -> void {
    if (i + 1 == n) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (Chips k = left; k >= 0; --k) {
      cur[i] = k;
      self(self, i + 1, left - k);
    }
  };
  if (n == 0) return out;
  rec(rec, 0, d);
  return out;
}

/// q-reducedness by definition: effective off q, and every nonempty S not
/// containing q has a vertex with fewer chips than edges leaving S.
inline bool is_reduced(const Multigraph& g, const Divisor& d, VertexId q) {
  const std::size_t n = g.num_vertices();
  for (VertexId v = 0; v < n; ++v)
    if (v != q && d[v] < 0) return false;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (mask >> q & 1) continue;
    bool blocked = false;
    for (VertexId v = 0; v < n && !blocked; ++v) {
      if (!(mask >> v & 1)) continue;
      Chips out = 0;
      for (const auto& nb : g.neighbors(v))
        if (!(mask >> nb.vertex & 1)) out += nb.multiplicity;
      if (d[v] < out) blocked = true;
    }
    if (!blocked) return false;
  }
  return true;
}

/// Baker-Norine rank by class membership: D - E is equivalent to an effective
/// divisor iff its class key appears among the effective divisors of that
/// degree.
class RankOracle {
 public:
  explicit RankOracle(const Multigraph& g) : g_(g), classes_(g, 0) {}

  bool has_effective(const Divisor& d) {
    const Chips deg = d.degree();
    if (deg < 0) return false;
    auto it = keys_.find(deg);
    if (it == keys_.end()) {
      std::set<std::pair<Chips, std::vector<Q>>> keys;
      for (const auto& e : effective_divisors(g_.num_vertices(), deg)) keys.insert(classes_.key(e));
      it = keys_.emplace(deg, std::move(keys)).first;
    }
    return it->second.count(classes_.key(d)) > 0;
  }

  Chips rank(const Divisor& d) {
    Chips r = -1;
    for (;;) {
      for (const auto& e : effective_divisors(g_.num_vertices(), r + 1))
        if (!has_effective(d - e)) return r;
      ++r;
    }
  }

 private:
  const Multigraph& g_;
  Classes classes_;
  std::map<Chips, std::set<std::pair<Chips, std::vector<Q>>>> keys_;
};

}  // namespace oracle
