#pragma once

#include <cstdint>
#include <cstdlib>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chipfire/dhar.hpp"
#include "chipfire/error.hpp"
#include "chipfire/graph.hpp"

namespace chipfire {

inline constexpr std::uint64_t default_budget = 10'000'000;

/// Default budget, overridden by the CHIPFIRE_BUDGET environment variable.
inline std::uint64_t budget_from_env(std::uint64_t fallback = default_budget) {
  const char* raw = std::getenv("CHIPFIRE_BUDGET");
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (*end != '\0' || value == 0)
    throw Error(Errc::invalid_parameter, std::string("CHIPFIRE_BUDGET is not a positive integer: ") + raw);
  return value;
}

/// Caps the number of candidate divisors an enumeration may visit.
class Budget {
 public:
  explicit Budget(std::uint64_t limit = default_budget) : limit_(limit) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t used() const noexcept { return used_; }

  void charge(std::uint64_t count, const char* what) {
    if (count > limit_ - used_)
      throw Error(Errc::resource_limit,
                  std::string(what) + " needs " + std::to_string(count) +
                      " more candidate divisors, budget " + std::to_string(limit_) + " has " +
                      std::to_string(limit_ - used_) + " left");
    used_ += count;
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

struct RankResult {
  Chips rank = -1;
  /// An effective divisor E of degree rank + 1 with D - E not equivalent to
  /// an effective divisor. Absent when the rank came from the Riemann-Roch
  /// degree shortcut.
  std::optional<Divisor> witness;
};

namespace detail {

// Number of effective divisors of degree r on n vertices, saturating.
inline std::uint64_t multiset_count(std::uint64_t n, std::uint64_t r) {
  if (n == 0) return r == 0 ? 1 : 0;
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  // C(n + r - 1, r) built incrementally; every prefix is itself a binomial.
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - 1 + i) / i;
    if (acc > cap) return cap;
  }
  return static_cast<std::uint64_t>(acc);
}

// Visits the effective divisors of degree r in lexicographic order (first
// vertex most significant, largest first). Stops when f returns false.
template <class F>
bool for_each_effective(std::size_t n, Chips r, F&& f) {
  if (n == 0) return r == 0 ? f(Divisor{}) : true;
  Divisor e(n);
  e[0] = r;
  for (;;) {
    if (!f(static_cast<const Divisor&>(e))) return false;
    // Find the rightmost non-last position with chips and move one chip right.
    std::size_t i = n - 1;
    while (i > 0 && e[i - 1] == 0) --i;
    if (i == 0) return true;
    const Chips tail = e[n - 1];
    e[n - 1] = 0;
    e[i - 1] -= 1;
    e[i] = tail + 1;
  }
}

}  // namespace detail

/// Decides rank(D) >= r by checking that D - E stays effective up to
/// equivalence for every effective E of degree r on the vertices.
/// On failure, *witness receives the offending E.
inline bool rank_at_least(const Multigraph& g, const Divisor& d, Chips r, Budget& budget,
                          Divisor* witness = nullptr) {
  require_on(g, d);
  if (r < 0) return true;
  const VertexId q = 0;
  detail::Reducer reducer(g, q);
  Divisor base = d;
  reducer.run(base);
  if (base[q] < 0) {
    if (witness) *witness = Divisor::zero(g);
    return false;
  }
  if (r == 0) return true;

  budget.charge(detail::multiset_count(g.num_vertices(), static_cast<std::uint64_t>(r)),
                "rank test");
  Divisor work;
  bool ok = true;
  detail::for_each_effective(g.num_vertices(), r, [&](const Divisor& e) {
    work = base;
    work -= e;
    if (work.is_effective()) return true;
    reducer.run(work);
    if (work[q] >= 0) return true;
    ok = false;
    if (witness) *witness = e;
    return false;
  });
  return ok;
}

/// Baker-Norine rank by enumeration, after the degree shortcuts
/// deg < 0 => -1 and deg >= 2g - 1 => deg - g.
inline RankResult rank(const Multigraph& g, const Divisor& d, Budget& budget) {
  require_on(g, d);
  g.require_connected();
  const Chips deg = d.degree();
  const Chips genus = g.genus();
  if (deg < 0) return {-1, Divisor::zero(g)};
  if (deg >= 2 * genus - 1) return {deg - genus, std::nullopt};

  RankResult out;
  for (Chips r = 0; r <= deg + 1; ++r) {
    Divisor witness;
    if (!rank_at_least(g, d, r, budget, &witness)) {
      out.rank = r - 1;
      out.witness = std::move(witness);
      return out;
    }
  }
  detail::ensure(false, "rank cannot exceed the degree");
  return out;
}

inline RankResult rank(const Multigraph& g, const Divisor& d,
                       std::uint64_t budget_limit = default_budget) {
  Budget budget(budget_limit);
  return rank(g, d, budget);
}

/// rank(D) - rank(K - D) == deg(D) - g + 1.
inline bool riemann_roch_check(const Multigraph& g, const Divisor& d, Budget& budget) {
  const Divisor k = canonical_divisor(g);
  const Chips lhs = rank(g, d, budget).rank - rank(g, k - d, budget).rank;
  return lhs == d.degree() - g.genus() + 1;
}

inline bool riemann_roch_check(const Multigraph& g, const Divisor& d,
                               std::uint64_t budget_limit = default_budget) {
  Budget budget(budget_limit);
  return riemann_roch_check(g, d, budget);
}

// ---------------------------------------------------------------------------
// Enumeration of effective q-reduced divisors (one per effective class)
// ---------------------------------------------------------------------------

/// Streams the q-reduced divisors of degree d with D(q) >= 0, i.e. one
/// representative for every effective class of degree d. Candidates are the
/// vectors with 0 <= D(v) < deg(v) off q, visited in lexicographic order;
/// each visited candidate is charged to the budget.
class ReducedDivisorEnumerator {
 public:
  ReducedDivisorEnumerator(const Multigraph& g, VertexId q, Chips degree, Budget* budget = nullptr)
      : g_(&g), q_(q), degree_(degree), budget_(budget) {
    if (!g.contains(q)) throw Error(Errc::invalid_parameter, "sink vertex out of range");
    if (degree < 0) throw Error(Errc::invalid_parameter, "degree must be nonnegative");
    g.require_connected();
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (v != q) others_.push_back(v);
    current_ = Divisor::zero(g);
  }

  /// Next reduced divisor, or nullopt when exhausted.
  std::optional<Divisor> next() {
    while (!done_) {
      const bool fresh = started_ ? advance() : (started_ = true);
      if (!fresh) {
        done_ = true;
        break;
      }
      if (budget_) budget_->charge(1, "reduced-divisor enumeration");
      current_[q_] = degree_ - off_sink_sum_;
      if (is_reduced(*g_, current_, q_)) return current_;
    }
    return std::nullopt;
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Divisor;
    using difference_type = std::ptrdiff_t;
    using pointer = const Divisor*;
    using reference = const Divisor&;

    iterator() = default;
    explicit iterator(ReducedDivisorEnumerator* owner) : owner_(owner) { ++*this; }

    reference operator*() const { return *value_; }
    pointer operator->() const { return &*value_; }
    iterator& operator++() {
      value_ = owner_->next();
      if (!value_) owner_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& x, const iterator& y) { return x.owner_ == y.owner_; }

   private:
    ReducedDivisorEnumerator* owner_ = nullptr;
    std::optional<Divisor> value_;
  };

  iterator begin() { return iterator(this); }
  iterator end() { return iterator(); }

 private:
  // Odometer step over the off-sink coordinates (last coordinate fastest),
  // skipping vectors whose sum exceeds the degree.
  bool advance() {
    for (std::size_t i = others_.size(); i-- > 0;) {
      const VertexId v = others_[i];
      if (current_[v] + 1 < g_->degree(v) && off_sink_sum_ + 1 <= degree_) {
        ++current_[v];
        ++off_sink_sum_;
        return true;
      }
      off_sink_sum_ -= current_[v];
      current_[v] = 0;
    }
    return false;
  }

  const Multigraph* g_;
  VertexId q_;
  Chips degree_;
  Budget* budget_;
  std::vector<VertexId> others_;
  Divisor current_;
  Chips off_sink_sum_ = 0;
  bool started_ = false;
  bool done_ = false;
};

inline std::vector<Divisor> enumerate_reduced_divisors(const Multigraph& g, VertexId q, Chips d,
                                                       Budget& budget) {
  std::vector<Divisor> out;
  ReducedDivisorEnumerator en(g, q, d, &budget);
  for (const auto& div : en) out.push_back(div);
  return out;
}

inline std::vector<Divisor> enumerate_reduced_divisors(const Multigraph& g, VertexId q, Chips d,
                                                       std::uint64_t budget_limit = default_budget) {
  Budget budget(budget_limit);
  return enumerate_reduced_divisors(g, q, d, budget);
}

// ---------------------------------------------------------------------------
// Gonality sequence
// ---------------------------------------------------------------------------

/// Smallest degree >= start of a divisor with rank >= r, by exhaustive
/// search over effective classes.
inline Chips min_degree_with_rank(const Multigraph& g, Chips r, Chips start, Budget& budget) {
  g.require_connected();
  if (r < 0) throw Error(Errc::invalid_parameter, "rank must be nonnegative");
  // Any divisor of degree g + r has rank >= r, so the scan stops by then.
  const Chips ceiling = g.genus() + r;
  for (Chips d = std::max<Chips>(start, r); d <= ceiling; ++d) {
    ReducedDivisorEnumerator en(g, 0, d, &budget);
    while (auto div = en.next())
      if (rank_at_least(g, *div, r, budget)) return d;
  }
  detail::ensure(false, "every divisor of degree g + r has rank at least r");
  return ceiling;
}

/// d_1, ..., d_{r_max}. For r >= g the value g + r is returned directly.
inline std::vector<Chips> gonality_sequence_search(const Multigraph& g, Chips r_max, Budget& budget) {
  g.require_connected();
  if (r_max < 1) throw Error(Errc::invalid_parameter, "max rank must be at least 1");
  std::vector<Chips> out;
  Chips previous = 0;
  for (Chips r = 1; r <= r_max; ++r) {
    // d_r < d_{r+1}: removing a chip lowers the rank by at most one.
    const Chips value = r >= g.genus() ? g.genus() + r : min_degree_with_rank(g, r, previous + 1, budget);
    out.push_back(value);
    previous = value;
  }
  return out;
}

inline std::vector<Chips> gonality_sequence_search(const Multigraph& g, Chips r_max,
                                                   std::uint64_t budget_limit = default_budget) {
  Budget budget(budget_limit);
  return gonality_sequence_search(g, r_max, budget);
}

}  // namespace chipfire
