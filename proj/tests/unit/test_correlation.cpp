#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "wmset/correlation.hpp"
#include "wmset/error.hpp"

using namespace wmset;

namespace {

CoprimeFamily odd_integers() {
  return CoprimeFamily::custom(CanonicalLattice::identity(1), {CanonicalLattice::scalar(1, 2)});
}

std::vector<Shift> shifts_up_to(std::int64_t bound, std::size_t want) {
  std::vector<Shift> out;
  for (std::int64_t a = 0; a <= bound && out.size() < want; ++a)
    for (std::int64_t b = -bound; b <= bound && out.size() < want; ++b) {
      if (a == 0 && b <= 0) continue;
      if (a * a + b * b <= bound * bound) out.push_back({a, b});
    }
  return out;
}

}  // namespace

TEST_CASE("zero shift is the density") {
  const Patch p = generate_visible(Region::box({0, 0}, 200));
  const AutocorrTable t = empirical_autocorr(p, {{0, 0}});
  CHECK(t.entries.front().empirical == density_estimate(p).value);
  CHECK(t.entries.front().pair_count == p.size());
}

TEST_CASE("odd integers") {
  const Patch p = generate(odd_integers(), Region::box({0}, 1000), 1);
  const AutocorrTable t = empirical_autocorr(p, {{1}, {2}});
  CHECK(t.entries[0].pair_count == 0);
  CHECK(t.entries[0].empirical == 0.0);
  CHECK(std::abs(t.entries[1].empirical - 0.5) < 2e-3);
}

TEST_CASE("pair counts are symmetric") {
  const Patch p = generate_visible(Region::ball({0, 0}, 150));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> coord(-6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const Shift z{coord(rng), coord(rng)};
    const AutocorrTable t = empirical_autocorr(p, {z, {-z[0], -z[1]}});
    CHECK(t.entries[0].pair_count == t.entries[1].pair_count);
  }
}

TEST_CASE("shift must lie in gamma") {
  const CoprimeFamily f = CoprimeFamily::custom(CanonicalLattice::scalar(2, 2), {CanonicalLattice::scalar(2, 6)});
  const Patch p = generate(f, Region::box({0, 0}, 20), 1);
  CHECK_THROWS_WITH_AS(empirical_autocorr(p, {{1, 0}}), doctest::Contains("ShiftNotInGamma"), Error);
  CHECK_NOTHROW(empirical_autocorr(p, {{2, 0}}));
}

TEST_CASE("theoretical values") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  CHECK(theoretical_autocorr(f, {0, 0}, n).lower() == model_density(f, n).lower());
  CHECK(theoretical_autocorr(f, {0, 0}, n).upper() == model_density(f, n).upper());
  CHECK(theoretical_autocorr(f, {2, 0}, n).contains(0.4839511484));
  CHECK(std::abs(theoretical_autocorr(f, {2, 0}, n).midpoint() - 0.48395) < 1e-4);

  // on a 2Z^2 ambient lattice the pair density is scaled by 1/4
  const CoprimeFamily g = CoprimeFamily::custom(CanonicalLattice::scalar(2, 2), {CanonicalLattice::scalar(2, 6)});
  CHECK(theoretical_autocorr_exact(g, {0, 0}, 1) == Rational(2, 9));
  CHECK(theoretical_autocorr_exact(g, {2, 0}, 1) == Rational(7, 36));
  CHECK(theoretical_autocorr_exact(g, {6, 0}, 1) == Rational(2, 9));
}

TEST_CASE("covariogram symmetry and empirical agreement") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> coord(-40, 40);
  for (int trial = 0; trial < 50; ++trial) {
    const Shift z{coord(rng), coord(rng)};
    const BoundedValue a = theoretical_autocorr(f, z, n);
    const BoundedValue b = theoretical_autocorr(f, {-z[0], -z[1]}, n);
    CHECK(a.lower() == b.lower());
    CHECK(a.upper() == b.upper());
    const BoundedValue c = theoretical_autocorr(f, {z[1], z[0]}, n);
    CHECK(a.lower() == c.lower());
  }

  const Patch p = generate_visible(Region::box({0, 0}, 1000));
  const AutocorrTable t = autocorr_table(f, p, {{1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}}, n);
  const double expected[] = {0.3223146, 0.3224025, 0.4834167, 0.3221827, 0.3680748};
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(t.entries[i].empirical == doctest::Approx(expected[i]).epsilon(1e-6));
    CHECK(std::abs(t.entries[i].empirical - t.entries[i].theoretical->midpoint()) <= 1e-2);
  }
}

TEST_CASE("finite families match the periodic pair density exactly") {
  const std::vector<CoprimeFamily> families{
      odd_integers(),
      CoprimeFamily::bfree({BigInt(4), BigInt(9), BigInt(25)}),
      CoprimeFamily::custom(CanonicalLattice::identity(2),
                            {CanonicalLattice::scalar(2, 2), CanonicalLattice::scalar(2, 3)}),
      CoprimeFamily::custom(CanonicalLattice::scalar(2, 2), {CanonicalLattice::scalar(2, 6)}),
  };
  for (const auto& f : families) {
    const std::size_t n = *f.size();
    const std::size_t d = f.dim();
    for (std::int64_t a = -4; a <= 4; a += 2)
      for (std::int64_t b = 0; b <= (d == 2 ? 6 : 0); b += 2) {
        Shift z = d == 1 ? Shift{a} : Shift{a, b};
        CHECK(periodic_autocorr(f, z) == theoretical_autocorr_exact(f, z, n));
        CHECK(theoretical_autocorr(f, z, n).contains(theoretical_autocorr_exact(f, z, n)));
      }
  }
}

TEST_CASE("sandwich check") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  const Patch p = generate_visible(Region::box({0, 0}, 1000));
  std::vector<Shift> shifts = shifts_up_to(5, 20);
  REQUIRE(shifts.size() == 20);
  shifts.push_back({0, 0});
  const SandwichReport rep = sandwich_check(f, autocorr_table(f, p, shifts, n));
  CHECK(rep.ok);
  CHECK(rep.worst_margin > 0.0);
  for (const auto& e : rep.entries) CHECK(e.margin > 0.0);

  const CoprimeFamily fin = odd_integers();
  const Patch q = generate(fin, Region::box({0}, 50), 1);
  const SandwichReport rq = sandwich_check(fin, autocorr_table(fin, q, {{2}, {4}}, 1));
  CHECK(rq.ok);
}

TEST_CASE("sandwich at z = 0 uses the density tolerance") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  // the density at radius 200 sits about 5e-4 above the limit
  const AutocorrTable t = autocorr_table(f, generate_visible(Region::box({0, 0}, 200)), {{0, 0}}, n);
  const SandwichReport strict = sandwich_check(f, t);
  CHECK_FALSE(strict.ok);
  CHECK(strict.worst_margin > -1e-3);
  const SandwichReport loose = sandwich_check(f, t, 1e-2);
  CHECK(loose.ok);
  CHECK(loose.entries.front().slack >= 1e-2);
}

TEST_CASE("truncated upper bounds decrease with the truncation level") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  for (const Shift& z : std::vector<Shift>{{1, 0}, {2, 0}, {6, 3}}) {
    double prev = 1.0;
    for (std::size_t n : {1u, 10u, 100u, 1000u}) {
      const BoundedValue v = theoretical_autocorr(f, z, n);
      CHECK(v.upper() <= prev);
      prev = v.upper();
    }
  }
}
