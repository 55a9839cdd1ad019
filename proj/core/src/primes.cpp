#include "wmset/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>

#include "wmset/error.hpp"

namespace wmset::primes {

namespace {

// Grows monotonically; readers take a shared lock.
struct Table {
  std::shared_mutex mutex;
  std::uint64_t limit = 1;
  std::vector<std::uint64_t> primes;
};

Table& table() {
  static Table t;
  return t;
}

std::vector<std::uint64_t> sieve(std::uint64_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

void ensure_limit(std::uint64_t n) {
  Table& t = table();
  {
    std::shared_lock lock(t.mutex);
    if (t.limit >= n) return;
  }
  std::unique_lock lock(t.mutex);
  if (t.limit >= n) return;
  std::uint64_t target = std::max<std::uint64_t>(n, 2 * t.limit);
  t.primes = sieve(target);
  t.limit = target;
}

std::uint64_t nth_upper_estimate(std::size_t i) {
  const double n = static_cast<double>(i + 1);
  if (n < 6) return 15;
  return static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 1;
}

}  // namespace

std::vector<std::uint64_t> up_to(std::uint64_t n) {
  ensure_limit(n);
  Table& t = table();
  std::shared_lock lock(t.mutex);
  auto end = std::upper_bound(t.primes.begin(), t.primes.end(), n);
  return {t.primes.begin(), end};
}

std::uint64_t nth(std::size_t i) {
  ensure_limit(nth_upper_estimate(i));
  Table& t = table();
  std::shared_lock lock(t.mutex);
  return t.primes.at(i);
}

std::size_t count_up_to(std::uint64_t n) {
  ensure_limit(n);
  Table& t = table();
  std::shared_lock lock(t.mutex);
  return static_cast<std::size_t>(std::upper_bound(t.primes.begin(), t.primes.end(), n) -
                                  t.primes.begin());
}

std::optional<std::size_t> position(std::uint64_t p) {
  ensure_limit(p);
  Table& t = table();
  std::shared_lock lock(t.mutex);
  auto it = std::lower_bound(t.primes.begin(), t.primes.end(), p);
  if (it == t.primes.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - t.primes.begin());
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(const BigInt& n) {
  if (n <= 0) throw Error(Errc::InvalidArgument, "factorize expects a positive integer");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  BigInt rest = n;
  for (std::uint64_t p = 2; BigInt(p) * p <= rest; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (rest > 1) {
    if (!fits_i64(rest)) throw Error(Errc::InvalidArgument, "prime factor exceeds 64 bits");
    out.emplace_back(rest.convert_to<std::uint64_t>(), 1u);
  }
  return out;
}

}  // namespace wmset::primes
