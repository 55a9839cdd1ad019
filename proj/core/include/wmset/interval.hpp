#pragma once

#include <string>

#include "wmset/bigint.hpp"

namespace wmset {

/// Closed real interval [lower, upper] with outward-rounded arithmetic.
///
/// Endpoints are binary doubles. Every operation rounds the lower endpoint
/// toward -inf and the upper endpoint toward +inf, so the true value of any
/// expression built from enclosing inputs stays enclosed. Results that are
/// exactly representable come out as zero-width intervals.
class BoundedValue {
 public:
  BoundedValue() = default;
  BoundedValue(double lower, double upper);

  static BoundedValue point(double v) { return BoundedValue(v, v); }
  /// Tightest enclosure of an exact rational.
  static BoundedValue enclose(const Rational& q);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double width() const noexcept { return upper_ - lower_; }
  double midpoint() const noexcept { return lower_ + 0.5 * (upper_ - lower_); }

  bool contains(double v) const noexcept { return lower_ <= v && v <= upper_; }
  bool contains(const Rational& q) const;
  bool overlaps(const BoundedValue& o) const noexcept {
    return lower_ <= o.upper_ && o.lower_ <= upper_;
  }

  /// [lower - eps, upper + eps], rounded outward.
  BoundedValue widened(double eps) const;

  std::string str() const;

 private:
  double lower_ = 0.0;
  double upper_ = 0.0;
};

BoundedValue operator+(const BoundedValue& a, const BoundedValue& b);
BoundedValue operator-(const BoundedValue& a, const BoundedValue& b);
BoundedValue operator-(const BoundedValue& a);
BoundedValue operator*(const BoundedValue& a, const BoundedValue& b);
/// Throws InvalidArgument if b contains zero.
BoundedValue operator/(const BoundedValue& a, const BoundedValue& b);

BoundedValue square(const BoundedValue& a);
/// Intersection with [lo, hi]; used to clamp probabilities and measures.
BoundedValue clamp(const BoundedValue& a, double lo, double hi);

/// 1 - x / y for exact integers 1 <= x <= y, enclosed.
BoundedValue one_minus_ratio(const BigInt& x, const BigInt& y);

/// Enclosure of 6 / pi^2 = 1 / zeta(2).
BoundedValue six_over_pi_squared();

}  // namespace wmset
