#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wmset {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer column vector of arbitrary precision.
using IntVec = std::vector<BigInt>;

/// Floor division for arbitrary-precision integers (rounds toward -inf).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Non-negative remainder, 0 <= r < |b|.
inline BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r < 0) r += (b < 0 ? BigInt(-b) : b);
  return r;
}

inline BigInt abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

inline std::int64_t to_i64(const BigInt& a) { return a.convert_to<std::int64_t>(); }

inline bool fits_i64(const BigInt& a) {
  return a >= std::numeric_limits<std::int64_t>::min() &&
         a <= std::numeric_limits<std::int64_t>::max();
}

inline IntVec to_intvec(const std::vector<std::int64_t>& v) {
  return IntVec(v.begin(), v.end());
}

inline std::string to_string(const Rational& q) {
  return q.str();
}

}  // namespace wmset
