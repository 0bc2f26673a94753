#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "chipfire/error.hpp"

namespace chipfire {

/// Exact rational number kept in lowest terms with a positive denominator.
/// Only used for interior positions on unit edges, so 64-bit parts suffice.
class Rational {
 public:
  constexpr Rational() = default;

  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw Error(Errc::invalid_parameter, "zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  /// Position seen from the other endpoint of a unit edge.
  Rational complement() const { return Rational(den_ - num_, den_); }

  bool in_open_unit_interval() const noexcept { return num_ > 0 && num_ < den_; }

  friend bool operator==(const Rational&, const Rational&) = default;

  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) noexcept {
    // Denominators are positive, so cross-multiplication preserves order.
    const __int128 lhs = static_cast<__int128>(x.num_) * y.den_;
    const __int128 rhs = static_cast<__int128>(y.num_) * x.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace chipfire
