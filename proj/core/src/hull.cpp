#include "wmset/hull.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "wmset/error.hpp"
#include "wmset/parallel.hpp"
#include "wmset/primes.hpp"

namespace wmset {

namespace {

constexpr std::int64_t kRowsPerBlock = 16;
constexpr std::size_t kMaxPatternPoints = 9;

std::int64_t mod64(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t norm2(const std::vector<std::int64_t>& x) {
  std::int64_t s = 0;
  for (std::int64_t v : x) s += v * v;
  return s;
}

}  // namespace

Admissibility admissible(const Patch& p, std::uint64_t prime_bound) {
  Admissibility out;
  out.admissible = true;
  const std::size_t d = p.dim();
  for (std::uint64_t prime : primes::up_to(prime_bound)) {
    const auto q = static_cast<std::int64_t>(prime);
    std::uint64_t cells = 1;
    for (std::size_t i = 0; i < d; ++i) cells *= prime;
    std::vector<bool> hit(cells, false);
    std::uint64_t missing = cells;
    for (std::size_t i = 0; i < p.size() && missing > 0; ++i) {
      std::uint64_t idx = 0;
      for (std::int64_t v : p.point(i)) idx = idx * prime + static_cast<std::uint64_t>(mod64(v, q));
      if (!hit[idx]) {
        hit[idx] = true;
        --missing;
      }
    }
    if (missing == 0) {
      out.admissible = false;
      out.failing_prime = prime;
      return out;
    }
    const auto first = static_cast<std::uint64_t>(std::find(hit.begin(), hit.end(), false) - hit.begin());
    CosetWitness w{prime, std::vector<std::int64_t>(d)};
    std::uint64_t rest = first;
    for (std::size_t i = d; i-- > 0;) {
      w.coset[i] = static_cast<std::int64_t>(rest % prime);
      rest /= prime;
    }
    out.witnesses.push_back(std::move(w));
  }
  return out;
}

std::size_t PatchPattern::dim() const {
  if (!occupied.empty()) return occupied.front().size();
  if (!empty.empty()) return empty.front().size();
  return 0;
}

void PatchPattern::validate() const {
  if (rho < 0) throw Error(Errc::InvalidPattern, "pattern radius must be non-negative");
  const std::size_t d = dim();
  std::set<std::vector<std::int64_t>> seen;
  auto check = [&](const std::vector<std::int64_t>& x) {
    if (x.size() != d || d == 0) throw Error(Errc::InvalidPattern, "pattern points of mixed dimension");
    if (norm2(x) > rho * rho) throw Error(Errc::InvalidPattern, "pattern point outside B_rho(0)");
    if (!seen.insert(x).second)
      throw Error(Errc::InvalidPattern, "pattern point listed twice (or both occupied and empty)");
  };
  for (const auto& x : occupied) check(x);
  for (const auto& x : empty) check(x);
}

std::vector<std::vector<std::int64_t>> ball_points(std::int64_t rho, std::size_t dim) {
  std::vector<std::vector<std::int64_t>> out;
  Region::ball(std::vector<std::int64_t>(dim, 0), rho).for_each_point([&](std::span<const std::int64_t> x) {
    out.emplace_back(x.begin(), x.end());
  });
  return out;
}

DensityEstimate patch_frequency_empirical(const Patch& p, const PatchPattern& pattern) {
  pattern.validate();
  if (pattern.size() > 0 && pattern.dim() != p.dim())
    throw Error(Errc::DimensionMismatch, "pattern vs patch dimension");
  const Region inner = p.region().shrunk(pattern.rho);
  const bool full_lattice = p.gamma() == CanonicalLattice::identity(p.dim());
  const PatchBitmap bitmap(p);

  const std::int64_t first = inner.lo()[0];
  const std::int64_t rows = inner.hi()[0] - first + 1;
  const auto blocks = static_cast<std::size_t>((rows + kRowsPerBlock - 1) / kRowsPerBlock);
  std::vector<std::uint64_t> hits(blocks, 0), total(blocks, 0);
  parallel::for_each_block(blocks, [&](std::size_t b) {
    const std::int64_t a = first + static_cast<std::int64_t>(b) * kRowsPerBlock;
    std::vector<std::int64_t> y(p.dim());
    auto matches = [&](std::span<const std::int64_t> t, const std::vector<std::int64_t>& x) {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = t[i] + x[i];
      return bitmap.test(y);
    };
    inner.for_each_point_in_rows(a, a + kRowsPerBlock - 1, [&](std::span<const std::int64_t> t) {
      if (!full_lattice && !contains(p.gamma(), IntVec(t.begin(), t.end()))) return;
      ++total[b];
      for (const auto& x : pattern.occupied)
        if (!matches(t, x)) return;
      for (const auto& x : pattern.empty)
        if (matches(t, x)) return;
      ++hits[b];
    });
  });
  DensityEstimate e;
  std::uint64_t n = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    e.count += hits[b];
    n += total[b];
  }
  e.volume = static_cast<double>(n);
  e.value = n == 0 ? 0.0 : static_cast<double>(e.count) / e.volume;
  e.region = inner;
  return e;
}

BoundedValue patch_frequency_exact(const CoprimeFamily& f, const PatchPattern& pattern,
                                   std::uint64_t prime_bound) {
  pattern.validate();
  if (pattern.size() > kMaxPatternPoints)
    throw Error(Errc::PatternTooLarge, "at most " + std::to_string(kMaxPatternPoints) +
                                           " constrained points, got " + std::to_string(pattern.size()));
  if (f.prime_exponent() == 0)
    throw Error(Errc::InvalidArgument, "exact pattern frequencies need a prime-power preset");
  if (pattern.size() > 0 && pattern.dim() != f.dim())
    throw Error(Errc::DimensionMismatch, "pattern vs family dimension");
  if (prime_bound <= static_cast<std::uint64_t>(2 * pattern.rho))
    throw Error(Errc::InvalidArgument, "prime bound must exceed twice the pattern radius");

  const std::size_t kept = f.members_up_to_prime(prime_bound);
  const double tail = f.tail_index_sum(kept);
  const std::size_t n_empty = pattern.empty.size();

  BoundedValue total = BoundedValue::point(0.0);
  for (std::uint32_t mask = 0; mask < (1u << n_empty); ++mask) {
    std::vector<std::vector<std::int64_t>> points = pattern.occupied;
    for (std::size_t j = 0; j < n_empty; ++j)
      if (mask & (1u << j)) points.push_back(pattern.empty[j]);
    // t must avoid the classes of -x modulo every member p^s Z^d.
    BoundedValue term = BoundedValue::point(1.0);
    for (std::size_t n = 0; n < kept && !points.empty(); ++n) {
      const BigInt modulus = f.scalar_modulus(n);
      std::set<IntVec> classes;
      for (const auto& x : points) {
        IntVec c(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) c[i] = floor_mod(BigInt(x[i]), modulus);
        classes.insert(std::move(c));
      }
      term = term * one_minus_ratio(BigInt(classes.size()), f.index(n));
    }
    if (!points.empty() && tail > 0.0) {
      const double low =
          clamp(BoundedValue::point(1.0) -
                    BoundedValue::point(static_cast<double>(points.size())) * BoundedValue::point(tail),
                0.0, 1.0)
              .lower();
      term = term * BoundedValue(low, 1.0);
    }
    total = (std::popcount(mask) % 2 == 0) ? total + term : total - term;
  }
  return total;
}

}  // namespace wmset
