#include <cstdint>
#include <vector>

#include "doctest.h"
#include "wmset/error.hpp"
#include "wmset/hull.hpp"

using namespace wmset;

namespace {

constexpr double kSixOverPiSq = 0.6079271018540267;

using Point = std::vector<std::int64_t>;

PatchPattern assignment(std::int64_t rho, const std::vector<Point>& pts, std::uint32_t occupied_mask) {
  PatchPattern p;
  p.rho = rho;
  for (std::size_t i = 0; i < pts.size(); ++i)
    (occupied_mask & (1u << i) ? p.occupied : p.empty).push_back(pts[i]);
  return p;
}

}  // namespace

TEST_CASE("admissibility") {
  const Patch vis = generate_visible(Region::box({0, 0}, 30));
  const Admissibility a = admissible(vis, 50);
  CHECK(a.admissible);
  CHECK_FALSE(a.failing_prime.has_value());
  REQUIRE(a.witnesses.size() == 15);
  for (const auto& w : a.witnesses) CHECK(w.coset == Point{0, 0});

  const Region disc = Region::ball({0, 0}, 50);
  std::vector<std::int64_t> coords;
  disc.for_each_point([&](std::span<const std::int64_t> x) { coords.insert(coords.end(), x.begin(), x.end()); });
  const Patch box(disc, CanonicalLattice::identity(2), "full", std::move(coords));
  const Admissibility b = admissible(box, 3);
  CHECK_FALSE(b.admissible);
  CHECK(*b.failing_prime == 2);

  const Patch none(Region::box({0, 0}, 3), CanonicalLattice::identity(2), "custom", {});
  CHECK(admissible(none, 50).admissible);
}

TEST_CASE("ball points") {
  CHECK(ball_points(0, 2) == std::vector<Point>{{0, 0}});
  CHECK(ball_points(1, 2).size() == 5);
  CHECK(ball_points(1, 1) == std::vector<Point>{{-1}, {0}, {1}});
}

TEST_CASE("pattern validation") {
  PatchPattern clash;
  clash.rho = 0;
  clash.occupied = {{0, 0}};
  clash.empty = {{0, 0}};
  CHECK_THROWS_WITH_AS(clash.validate(), doctest::Contains("InvalidPattern"), Error);
  PatchPattern outside;
  outside.rho = 1;
  outside.occupied = {{1, 1}};
  CHECK_THROWS_WITH_AS(outside.validate(), doctest::Contains("InvalidPattern"), Error);
  PatchPattern negative;
  negative.rho = -1;
  CHECK_THROWS_AS(negative.validate(), Error);

  PatchPattern big;
  big.rho = 2;
  big.occupied = ball_points(2, 2);
  CHECK(big.size() == 13);
  CHECK_THROWS_WITH_AS(patch_frequency_exact(CoprimeFamily::visible_d2(), big, 50),
                       doctest::Contains("PatternTooLarge"), Error);
}

TEST_CASE("one-point patterns") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const Patch p = generate_visible(Region::box({0, 0}, 300));
  const PatchPattern occ = assignment(0, {{0, 0}}, 1);
  const PatchPattern emp = assignment(0, {{0, 0}}, 0);
  const DensityEstimate a = patch_frequency_empirical(p, occ);
  const DensityEstimate b = patch_frequency_empirical(p, emp);
  CHECK(a.value == density_estimate(p).value);
  CHECK(a.count + b.count == static_cast<std::uint64_t>(a.volume));
  CHECK(std::abs(b.value - 0.392) < 1e-2);
  CHECK(patch_frequency_exact(f, occ, 1000).contains(kSixOverPiSq));
  CHECK(patch_frequency_exact(f, emp, 1000).contains(1.0 - kSixOverPiSq));
}

TEST_CASE("radius-one patterns partition the translations") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const Patch p = generate_visible(Region::box({0, 0}, 200));
  const std::vector<Point> pts = ball_points(1, 2);
  std::uint64_t hits = 0;
  double volume = 0.0;
  BoundedValue exact_sum = BoundedValue::point(0.0);
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    const PatchPattern pat = assignment(1, pts, mask);
    const DensityEstimate e = patch_frequency_empirical(p, pat);
    hits += e.count;
    volume = e.volume;
    const BoundedValue exact = patch_frequency_exact(f, pat, 200);
    exact_sum = exact_sum + exact;
    CHECK(exact.lower() - 0.02 <= e.value);
    CHECK(e.value <= exact.upper() + 0.02);
  }
  CHECK(static_cast<double>(hits) == volume);
  CHECK(exact_sum.contains(1.0));
}

TEST_CASE("all-occupied plus pattern") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const Patch p = generate_visible(Region::box({0, 0}, 1000));
  const PatchPattern pat = assignment(1, ball_points(1, 2), 31);
  const BoundedValue exact = patch_frequency_exact(f, pat, 10000);
  const DensityEstimate e = patch_frequency_empirical(p, pat);
  CHECK(e.value > 0.0);
  // the exact interval encloses the limit; radius 1000 is within 1e-5 of it
  CHECK(exact.widened(1e-5).contains(e.value));
  CHECK(exact.lower() == doctest::Approx(0.0683056).epsilon(1e-6));
}

TEST_CASE("exact frequencies need a prime-power family and a large enough prime bound") {
  const PatchPattern occ = assignment(1, {{0, 0}, {1, 0}}, 3);
  CHECK_THROWS_AS(patch_frequency_exact(CoprimeFamily::bfree({BigInt(4), BigInt(9)}), assignment(0, {{0}}, 1), 50),
                  Error);
  CHECK_THROWS_AS(patch_frequency_exact(CoprimeFamily::visible_d2(), occ, 2), Error);
  CHECK_NOTHROW(patch_frequency_exact(CoprimeFamily::visible_d2(), occ, 3));
}
