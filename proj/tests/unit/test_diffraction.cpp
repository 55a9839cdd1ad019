#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "wmset/diffraction.hpp"
#include "wmset/error.hpp"
#include "wmset/primes.hpp"

using namespace wmset;

namespace {

constexpr double kSixOverPiSq = 0.6079271018540267;

RationalPoint rp(const char* text) { return RationalPoint::parse(text); }

DualBox unit_box(std::int64_t lo, std::int64_t hi, bool include_upper) {
  DualBox b;
  b.lo = {Rational(lo), Rational(lo)};
  b.hi = {Rational(hi), Rational(hi)};
  b.include_upper = include_upper;
  return b;
}

Patch full_lattice_patch(const Region& r) {
  std::vector<std::int64_t> coords;
  r.for_each_point([&](std::span<const std::int64_t> x) { coords.insert(coords.end(), x.begin(), x.end()); });
  return Patch(r, CanonicalLattice::identity(r.dim()), "full", std::move(coords));
}

}  // namespace

TEST_CASE("rational points") {
  const RationalPoint k = rp("1/2,-2/6,0");
  CHECK(k.coords[1] == Rational(-1, 3));
  CHECK(k.denominator() == 6);
  CHECK(k.str() == "(1/2,-1/3,0)");
  CHECK((k + (-k)).is_zero());
  CHECK_THROWS_AS(rp("1/0"), Error);
  CHECK_THROWS_AS(rp("a,b"), Error);
}

TEST_CASE("minimal support") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  CHECK(minimal_support(f, rp("3,-1")).empty());
  const SupportSet s = minimal_support(f, rp("1/6,0"));
  CHECK(support_labels(f, s) == std::vector<std::string>{"2", "3"});
  CHECK_THROWS_WITH_AS(minimal_support(f, rp("1/4,0")), doctest::Contains("NotInSpectrum"), Error);
  CHECK_THROWS_AS(minimal_support(f, rp("1/2")), Error);

  const CoprimeFamily fin = CoprimeFamily::custom(CanonicalLattice::identity(2),
                                                  {CanonicalLattice::scalar(2, 2), CanonicalLattice::scalar(2, 3)});
  CHECK(minimal_support(fin, rp("1/3,2/3")) == SupportSet{1});
  CHECK(support_labels(fin, SupportSet{0, 1}) == std::vector<std::string>{"1", "2"});
  CHECK_THROWS_WITH_AS(minimal_support(fin, rp("1/5,0")), doctest::Contains("NotInSpectrum"), Error);
}

TEST_CASE("closed-form amplitudes") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  CHECK(amplitude(f, rp("0,0"), n).contains(kSixOverPiSq));
  CHECK(amplitude(f, rp("1/2,1/2"), n).contains(-0.2026423673));
  CHECK(amplitude(f, rp("1/6,1/6"), n).contains(0.0253302959));
  CHECK(amplitude(f, rp("1/3,0"), n).contains(-0.0759908877));
  CHECK(amplitude(f, rp("1/2,1/2"), n).width() < 1e-3);
}

TEST_CASE("visible intensities") {
  CHECK(intensity_visible(rp("0,0")).contains(0.3695753611686361));
  CHECK(intensity_visible(rp("1/2,0")).midpoint() == doctest::Approx(0.0410639290).epsilon(1e-9));
  CHECK((intensity_visible(rp("1/2,0")) * BoundedValue::point(9.0)).overlaps(intensity_visible(rp("0,0"))));
  const BoundedValue a = intensity_visible(rp("1/2,0"));
  const BoundedValue b = intensity_visible(rp("3/2,1"));
  CHECK(a.lower() == b.lower());
  CHECK(a.upper() == b.upper());
  CHECK_THROWS_WITH_AS(intensity_visible(rp("1/4,0")), doctest::Contains("DenominatorNotSquareFree"), Error);
}

TEST_CASE("empirical amplitudes") {
  const Patch p = generate_visible(Region::box({0, 0}, 300));
  const std::complex<double> a0 = empirical_amplitude(p, rp("0,0"));
  CHECK(a0.real() == density_estimate(p).value);
  CHECK(a0.imag() == 0.0);

  const Patch even = full_lattice_patch(Region::range({0, 0}, {9, 9}));
  CHECK(std::abs(empirical_amplitude(even, rp("1/2,0"))) == 0.0);

  // triangle inequality and conjugation
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(0, 11), den(1, 12);
  for (int trial = 0; trial < 30; ++trial) {
    RationalPoint k;
    k.coords = {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
    const std::complex<double> v = empirical_amplitude(p, k);
    CHECK(std::abs(v) <= density_estimate(p).value * (1.0 + 1e-12));
    const std::complex<double> w = empirical_amplitude(p, -k);
    CHECK(std::abs(w - std::conj(v)) < 1e-12);
  }
}

TEST_CASE("inclusion-exclusion oracle") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t m = f.members_up_to_prime(100);
  CHECK(inclusion_exclusion_amplitude(f, rp("0,0"), m).contains(kSixOverPiSq));
  CHECK(inclusion_exclusion_amplitude(f, rp("1/2,1/2"), m)
            .overlaps(amplitude(f, rp("1/2,1/2"), f.members_up_to_prime(10000))));
  CHECK_THROWS_WITH_AS(inclusion_exclusion_partial(f, rp("1/101,0"), m), doctest::Contains("SupportNotCovered"),
                       Error);

  const CoprimeFamily fin = CoprimeFamily::bfree({BigInt(4), BigInt(9), BigInt(25)});
  for (const char* k : {"0", "1/4", "5/36", "1/900", "7/225", "3/4"}) {
    CHECK(inclusion_exclusion_partial(fin, rp(k), 3) == amplitude_exact(fin, rp(k)));
    CHECK(amplitude(fin, rp(k), 3).contains(amplitude_exact(fin, rp(k))));
  }
}

TEST_CASE("finite Fourier transform of one period matches the closed form") {
  const std::vector<CoprimeFamily> families{
      CoprimeFamily::custom(CanonicalLattice::identity(1), {CanonicalLattice::scalar(1, 2)}),
      CoprimeFamily::bfree({BigInt(4), BigInt(9)}),
      CoprimeFamily::custom(CanonicalLattice::identity(2),
                            {CanonicalLattice::scalar(2, 2), CanonicalLattice::scalar(2, 3)}),
  };
  for (const auto& f : families) {
    std::int64_t period = 1;
    for (std::size_t n = 0; n < *f.size(); ++n) period *= static_cast<std::int64_t>(f.scalar_modulus(n));
    const std::size_t d = f.dim();
    const Region r = Region::range(std::vector<std::int64_t>(d, 0), std::vector<std::int64_t>(d, period - 1));
    const Patch p = generate(f, r, *f.size());
    double parseval = 0.0;
    for (std::int64_t a = 0; a < period; ++a)
      for (std::int64_t b = 0; b < (d == 2 ? period : 1); ++b) {
        RationalPoint k;
        k.coords.push_back(Rational(a, period));
        if (d == 2) k.coords.push_back(Rational(b, period));
        const std::complex<double> v = empirical_amplitude(p, k);
        const Rational exact = amplitude_exact(f, k);
        CHECK(std::abs(v.real() - static_cast<double>(exact)) < 1e-12);
        CHECK(std::abs(v.imag()) < 1e-12);
        parseval += std::norm(v);
      }
    // sum of intensities over the dual period equals the density
    CHECK(std::abs(parseval - density_estimate(p).value) < 1e-12);
  }
}

TEST_CASE("spectrum tables") {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);

  const SpectrumTable top = spectrum_table(f, unit_box(0, 2, true), 1.0, n);
  CHECK(top.lines.size() == 9);
  for (const auto& line : top.lines) {
    CHECK(line.support.empty());
    CHECK(line.relative_intensity == 1);
    CHECK(line.intensity.contains(0.3695753611686361));
  }

  const std::vector<RationalPoint> s = spectral_support(f, unit_box(0, 1, false), 1e-3);
  bool has_half = false;
  for (const auto& k : s) {
    if (k == rp("1/2,1/2")) has_half = true;
    CHECK(k.denominator() % 4 != 0);
  }
  CHECK(has_half);

  const SpectrumTable a = spectrum_table(f, unit_box(0, 1, false), 1e-6, n);
  const SpectrumTable b = spectrum_table(f, unit_box(1, 2, false), 1e-6, n);
  REQUIRE(a.lines.size() == b.lines.size());
  CHECK(a.lines.size() > 1);
  std::map<RationalPoint, Rational> shifted;
  for (const auto& line : b.lines) shifted[line.k] = line.relative_intensity;
  for (const auto& line : a.lines) {
    const auto it = shifted.find(line.k + rp("1,1"));
    REQUIRE(it != shifted.end());
    CHECK(it->second == line.relative_intensity);
  }
  for (std::size_t i = 1; i < a.lines.size(); ++i)
    CHECK(a.lines[i - 1].relative_intensity >= a.lines[i].relative_intensity);
  CHECK_THROWS_AS(spectrum_table(f, unit_box(0, 1, false), 0.0, n), Error);
}
