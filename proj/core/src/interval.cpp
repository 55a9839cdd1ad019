#include "wmset/interval.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wmset/error.hpp"

namespace wmset {

namespace {

class RoundingScope {
 public:
  explicit RoundingScope(int mode) : saved_(std::fegetround()) { std::fesetround(mode); }
  ~RoundingScope() { std::fesetround(saved_); }
  RoundingScope(const RoundingScope&) = delete;
  RoundingScope& operator=(const RoundingScope&) = delete;

 private:
  int saved_;
};

template <class Op>
double rounded(int mode, Op op) {
  RoundingScope scope(mode);
  volatile double r = op();
  return r;
}

double down_of(const Rational& q) {
  double v = q.convert_to<double>();
  while (Rational(v) > q) v = std::nextafter(v, -INFINITY);
  return v;
}

double up_of(const Rational& q) {
  double v = q.convert_to<double>();
  while (Rational(v) < q) v = std::nextafter(v, INFINITY);
  return v;
}

}  // namespace

BoundedValue::BoundedValue(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!(lower <= upper))
    throw Error(Errc::InvalidArgument, "interval lower endpoint exceeds upper endpoint");
}

BoundedValue BoundedValue::enclose(const Rational& q) { return BoundedValue(down_of(q), up_of(q)); }

bool BoundedValue::contains(const Rational& q) const {
  return Rational(lower_) <= q && q <= Rational(upper_);
}

BoundedValue BoundedValue::widened(double eps) const {
  return BoundedValue(rounded(FE_DOWNWARD, [&] { return lower_ - eps; }),
                      rounded(FE_UPWARD, [&] { return upper_ + eps; }));
}

std::string BoundedValue::str() const {
  std::ostringstream os;
  os.precision(17);
  os << '[' << lower_ << ", " << upper_ << ']';
  return os.str();
}

BoundedValue operator+(const BoundedValue& a, const BoundedValue& b) {
  return BoundedValue(rounded(FE_DOWNWARD, [&] { return a.lower() + b.lower(); }),
                      rounded(FE_UPWARD, [&] { return a.upper() + b.upper(); }));
}

BoundedValue operator-(const BoundedValue& a) { return BoundedValue(-a.upper(), -a.lower()); }

BoundedValue operator-(const BoundedValue& a, const BoundedValue& b) { return a + (-b); }

BoundedValue operator*(const BoundedValue& a, const BoundedValue& b) {
  const double lo = rounded(FE_DOWNWARD, [&] {
    return std::min({a.lower() * b.lower(), a.lower() * b.upper(), a.upper() * b.lower(),
                     a.upper() * b.upper()});
  });
  const double hi = rounded(FE_UPWARD, [&] {
    return std::max({a.lower() * b.lower(), a.lower() * b.upper(), a.upper() * b.lower(),
                     a.upper() * b.upper()});
  });
  return BoundedValue(lo, hi);
}

BoundedValue operator/(const BoundedValue& a, const BoundedValue& b) {
  if (b.contains(0.0)) throw Error(Errc::InvalidArgument, "interval division by zero");
  const double lo = rounded(FE_DOWNWARD, [&] {
    return std::min({a.lower() / b.lower(), a.lower() / b.upper(), a.upper() / b.lower(),
                     a.upper() / b.upper()});
  });
  const double hi = rounded(FE_UPWARD, [&] {
    return std::max({a.lower() / b.lower(), a.lower() / b.upper(), a.upper() / b.lower(),
                     a.upper() / b.upper()});
  });
  return BoundedValue(lo, hi);
}

BoundedValue square(const BoundedValue& a) {
  const double m = std::min(std::abs(a.lower()), std::abs(a.upper()));
  const double big = std::max(std::abs(a.lower()), std::abs(a.upper()));
  const double lo = a.contains(0.0) ? 0.0 : rounded(FE_DOWNWARD, [&] { return m * m; });
  return BoundedValue(lo, rounded(FE_UPWARD, [&] { return big * big; }));
}

BoundedValue clamp(const BoundedValue& a, double lo, double hi) {
  const double l = std::clamp(a.lower(), lo, hi);
  const double u = std::clamp(a.upper(), lo, hi);
  return BoundedValue(l, u);
}

BoundedValue one_minus_ratio(const BigInt& x, const BigInt& y) {
  return BoundedValue::enclose(Rational(1) - Rational(x, y));
}

BoundedValue six_over_pi_squared() {
  // pi lies strictly between std::numbers::pi and its successor.
  const double pi_lo = std::numbers::pi;
  const double pi_hi = std::nextafter(pi_lo, 4.0);
  const double sq_hi = rounded(FE_UPWARD, [&] { return pi_hi * pi_hi; });
  const double sq_lo = rounded(FE_DOWNWARD, [&] { return pi_lo * pi_lo; });
  const double lo = rounded(FE_DOWNWARD, [&] { return 6.0 / sq_hi; });
  const double hi = rounded(FE_UPWARD, [&] { return 6.0 / sq_lo; });
  return BoundedValue(lo, hi);
}

}  // namespace wmset
