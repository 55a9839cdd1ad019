// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lattice_oracle.hpp"
#include "wmset/correlation.hpp"
#include "wmset/diffraction.hpp"
#include "wmset/error.hpp"
#include "wmset/family.hpp"
#include "wmset/hull.hpp"
#include "wmset/interval.hpp"
#include "wmset/pointset.hpp"

using namespace wmset;

namespace {

constexpr double kSixOverPiSq = 0.6079271018540267;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok || detail.tellp() > 0) detail << "; ";
      detail << "violated: " << what;
      ok = false;
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> body;
};

RationalPoint rp(const std::string& s) { return RationalPoint::parse(s); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

bool squareful(std::int64_t n) {
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % (q * q) == 0) return true;
  return false;
}

// Shared radius-2000 visible patch for the amplitude criteria.
const Patch& visible_2000() {
  static const Patch p = generate_visible(Region::box({0, 0}, 2000));
  return p;
}

void c1_visible_density(Outcome& o) {
  const DensityEstimate e = density_estimate(generate_visible(Region::box({0, 0}, 1000)));
  o.detail << "density=" << fmt(e.value) << " |diff|=" << fmt(std::abs(e.value - kSixOverPiSq));
  o.require(std::abs(e.value - kSixOverPiSq) <= 5e-3, "|density - 6/pi^2| <= 5e-3");
}

void c2_window_measure(Outcome& o) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const BoundedValue w = window_measure(f, f.members_up_to_prime(10000));
  const BoundedValue ref = six_over_pi_squared();
  o.detail << "window=" << w.str() << " width=" << fmt(w.width());
  o.require(w.width() < 1e-3, "width < 1e-3");
  o.require(w.lower() <= ref.lower() && ref.upper() <= w.upper(), "interval contains 6/pi^2");
}

void c3_autocorrelation(Outcome& o) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  const Patch p = generate_visible(Region::box({0, 0}, 1000));
  const AutocorrTable t = autocorr_table(f, p, {{1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}}, n);
  double worst = 0.0;
  for (const AutocorrEntry& e : t.entries) {
    const double diff = std::abs(e.empirical - e.theoretical->midpoint());
    worst = std::max(worst, diff);
    o.require(diff <= 1e-2, "z=(" + std::to_string(e.z[0]) + "," + std::to_string(e.z[1]) + ") within 1e-2");
  }
  o.detail << "(1,0): " << fmt(t.entries[0].empirical) << " vs " << fmt(t.entries[0].theoretical->midpoint())
           << ", (2,0): " << fmt(t.entries[2].empirical) << " vs " << fmt(t.entries[2].theoretical->midpoint())
           << ", worst |diff|=" << fmt(worst);
}

void c4_amplitudes(Outcome& o) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  double worst = 0.0;
  for (const char* k : {"0,0", "1/2,1/2", "1/3,0", "1/6,1/6"}) {
    const std::complex<double> emp = empirical_amplitude(visible_2000(), rp(k));
    const double diff = std::abs(emp - std::complex<double>(amplitude(f, rp(k), n).midpoint(), 0.0));
    worst = std::max(worst, diff);
    o.require(diff <= 1e-2, std::string("k=(") + k + ") within 1e-2");
  }
  o.detail << "a(1/2,1/2) empirical=" << fmt(empirical_amplitude(visible_2000(), rp("1/2,1/2")).real())
           << " closed=" << fmt(amplitude(f, rp("1/2,1/2"), n).midpoint()) << ", worst |diff|=" << fmt(worst);
}

void c5_off_spectrum(Outcome& o) {
  double worst = 0.0;
  for (const char* k : {"1/4,0", "1/8,3/8", "1/9,0"}) {
    const double mag = std::abs(empirical_amplitude(visible_2000(), rp(k)));
    worst = std::max(worst, mag);
    o.require(mag <= 2e-2, std::string("|a(") + k + ")| <= 2e-2");
  }
  o.detail << "max |empirical|=" << fmt(worst);
}

void c6_two_oracles(Outcome& o) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  const std::size_t m = f.members_up_to_prime(100);
  const std::vector<std::string> ks{"0,0",     "1/2,0",    "1/2,1/2",   "1/3,2/3",  "1/5,0",     "1/6,1/6",  "1/7,3/7",
                                    "3/10,0",  "1/11,5/11", "7/13,0",  "1/14,1/2", "2/15,1/3",  "1/17,16/17", "4/19,9/19",
                                    "1/21,0",  "5/22,1/2", "1/23,22/23", "3/26,1/13", "1/29,0", "7/30,11/30"};
  int overlaps = 0;
  for (const std::string& k : ks) {
    const RationalPoint kp = rp(k);
    o.require(kp.denominator() <= 30, k + " denominator <= 30");
    const bool ok = amplitude(f, kp, n).overlaps(inclusion_exclusion_amplitude(f, kp, m));
    overlaps += ok;
    o.require(ok, "intervals overlap at (" + k + ")");
  }
  o.detail << overlaps << "/" << ks.size() << " spectrum points overlap";
}

DualBox square_box(std::int64_t lo, std::int64_t hi, bool include_upper) {
  DualBox b;
  b.lo = {Rational(lo), Rational(lo)};
  b.hi = {Rational(hi), Rational(hi)};
  b.include_upper = include_upper;
  return b;
}

void c7_spectrum(Outcome& o) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(10000);
  const SpectrumTable full = spectrum_table(f, square_box(0, 2, true), 1e-6, n);
  o.detail << full.lines.size() << " lines in [0,2]^2";
  o.require(!full.lines.empty(), "finite non-empty line set");

  // I(0) = (6/pi^2)^2
  const BoundedValue i0 = square(six_over_pi_squared());
  std::map<RationalPoint, Rational> rel;
  for (const SpectralLine& line : full.lines) {
    rel[line.k] = line.relative_intensity;
    if (line.k.is_zero()) {
      o.require(line.relative_intensity == 1, "relative intensity of k=0 is 1");
      o.require(line.intensity.overlaps(i0) && line.intensity.contains(0.3695753611686361), "I(0) = (6/pi^2)^2");
    }
  }
  o.require(rel.count(rp("0,0")) == 1, "k=0 present");

  // exact Z^2-periodicity inside the closed box
  std::size_t checked = 0;
  for (const auto& [k, r] : rel)
    for (const char* v : {"1,0", "0,1", "1,1"}) {
      const auto it = rel.find(k + rp(v));
      if (it == rel.end()) continue;
      ++checked;
      o.require(it->second == r, "I(k+v) = I(k) at k=" + k.str());
    }
  o.require(checked > 0, "periodic pairs found");

  const SpectrumTable a = spectrum_table(f, square_box(0, 1, false), 1e-6, n);
  const SpectrumTable b = spectrum_table(f, square_box(1, 2, false), 1e-6, n);
  std::map<RationalPoint, Rational> shifted;
  for (const SpectralLine& line : b.lines) shifted[line.k] = line.relative_intensity;
  bool bijection = a.lines.size() == b.lines.size();
  for (const SpectralLine& line : a.lines) {
    const auto it = shifted.find(line.k + rp("1,1"));
    bijection = bijection && it != shifted.end() && it->second == line.relative_intensity;
  }
  o.require(bijection, "[0,1)^2 and [1,2)^2 in intensity-preserving bijection");
  o.detail << ", " << checked << " periodic pairs, " << a.lines.size() << " lines per unit cell";
}

void c8_index_formula(Outcome& o) {
  const std::vector<long> ps{2, 3, 5, 7};
  int cases = 0;
  for (std::size_t d = 1; d <= 2; ++d) {
    const auto z = CanonicalLattice::identity(d);
    for (unsigned mask = 1; mask < 16; ++mask) {
      if (std::popcount(mask) > 3) continue;
      CanonicalLattice acc = z;
      BigInt product = 1;
      for (std::size_t i = 0; i < ps.size(); ++i)
        if (mask & (1u << i)) {
          const CanonicalLattice sub = CanonicalLattice::scalar(d, ps[i]);
          acc = intersect(acc, sub);
          product *= index(z, sub);
        }
      ++cases;
      o.require(index(z, acc) == product, "index formula, d=" + std::to_string(d) + " mask=" + std::to_string(mask));
    }
  }
  o.detail << cases << " sections checked";
}

void c9_kfree_density(Outcome& o) {
  const DensityEstimate e = density_estimate(generate_kfree(2, Region::range({1}, {1000000})));
  o.detail << "density=" << fmt(e.value) << " |diff|=" << fmt(std::abs(e.value - kSixOverPiSq));
  o.require(std::abs(e.value - kSixOverPiSq) <= 5e-3, "|density - 6/pi^2| <= 5e-3");
}

void c10_holes(Outcome& o) {
  const Hole v = find_hole(CoprimeFamily::visible_d2(), 1);
  std::set<std::pair<std::int64_t, std::int64_t>> offsets;
  for (const HoleWitness& w : v.witnesses) {
    offsets.insert({to_i64(w.offset[0]), to_i64(w.offset[1])});
    o.require(std::gcd(to_i64(w.point[0]), to_i64(w.point[1])) > 1, "witness point is invisible");
  }
  o.require(offsets.size() == 9, "3x3 block covered");

  const Hole s = find_hole(CoprimeFamily::kfree(2), 1);
  const std::int64_t start = to_i64(s.t[0]) + to_i64(s.witnesses.front().offset[0]);
  for (const HoleWitness& w : s.witnesses) o.require(squareful(to_i64(w.point[0])), "witness is not square-free");
  std::int64_t smallest = 0;
  for (std::int64_t n = 1; smallest == 0; ++n)
    if (squareful(n) && squareful(n + 1) && squareful(n + 2)) smallest = n;
  o.require(smallest == 48, "scan finds 48,49,50 first");
  o.require(s.witnesses.size() == 3 && start >= smallest, "constructed run is not below the smallest one");
  o.detail << "visible t=(" << v.t[0].str() << "," << v.t[1].str() << "); square-free run starts at " << start
           << ", smallest " << smallest;
}

void c11_patch_frequencies(Outcome& o) {
  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const Patch p = generate_visible(Region::box({0, 0}, 1000));
  const auto ball = ball_points(1, 2);
  int patterns = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (std::size_t j = i + 1; j < ball.size(); ++j)
      for (unsigned occ = 0; occ < 4; ++occ) {
        PatchPattern pat;
        pat.rho = 1;
        (occ & 1 ? pat.occupied : pat.empty).push_back(ball[i]);
        (occ & 2 ? pat.occupied : pat.empty).push_back(ball[j]);
        const double emp = patch_frequency_empirical(p, pat).value;
        const BoundedValue exact = patch_frequency_exact(f, pat, 10000);
        const double dist = std::max({0.0, exact.lower() - emp, emp - exact.upper()});
        worst = std::max(worst, dist);
        ++patterns;
        o.require(dist <= 1e-2, "pattern " + std::to_string(patterns) + " inside widened interval");
      }

  PatchPattern occ, emp;
  occ.occupied = {{0, 0}};
  emp.empty = {{0, 0}};
  const DensityEstimate a = patch_frequency_empirical(p, occ), b = patch_frequency_empirical(p, emp);
  o.require(a.volume == b.volume && static_cast<double>(a.count + b.count) == a.volume,
            "rho=0 frequencies sum to 1 exactly");
  o.detail << patterns << " patterns, worst distance " << fmt(worst) << "; rho=0 counts " << a.count << "+"
           << b.count << "=" << fmt(a.volume);
}

void c12_properties(Outcome& o) {
  using namespace wmset::testing;
  std::mt19937_64 rng(12);
  std::size_t lattices = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    const std::int64_t r = d == 3 ? 5 : 15;
    for (int trial = 0; trial < 20; ++trial) {
      const Mat ma = random_basis(rng, d, 50), mb = random_basis(rng, d, 50);
      const CanonicalLattice a = to_lattice(ma), b = to_lattice(mb);
      const Oracle oa(ma), ob(mb);
      const CanonicalLattice i = intersect(a, b), s = sum(a, b);
      bool agree = a.det_abs() == std::abs(oa.d) && index(CanonicalLattice::identity(d), a) == std::abs(oa.d);
      for_each_in_box(d, r, [&](const std::vector<std::int64_t>& x) {
        agree = agree && contains(a, big(x)) == oa.contains(x) &&
                contains(i, big(x)) == (oa.contains(x) && ob.contains(x));
      });
      agree = agree && s.det_abs() * i.det_abs() == a.det_abs() * b.det_abs() && is_sublattice(a, s) &&
              is_sublattice(b, s);
      o.require(agree, "lattice oracle, d=" + std::to_string(d));
      ++lattices;
    }
  }

  const CoprimeFamily f = CoprimeFamily::visible_d2();
  const std::size_t n = f.members_up_to_prime(1000);
  std::uniform_int_distribution<std::int64_t> coord(-30, 30);
  for (int trial = 0; trial < 100; ++trial) {
    const Shift z{coord(rng), coord(rng)};
    const BoundedValue c1 = theoretical_autocorr(f, z, n), c2 = theoretical_autocorr(f, {-z[0], -z[1]}, n);
    o.require(c1.lower() == c2.lower() && c1.upper() == c2.upper(), "covariogram symmetry");
  }

  const Patch p = generate_visible(Region::ball({0, 0}, 300));
  for (int trial = 0; trial < 20; ++trial) {
    const Shift z{coord(rng) / 3, coord(rng) / 3};
    const AutocorrTable t = empirical_autocorr(p, {z, {-z[0], -z[1]}});
    o.require(t.entries[0].pair_count == t.entries[1].pair_count, "pair-count symmetry");
  }

  const std::vector<std::int64_t> dens{1, 2, 3, 5, 6, 10, 15, 30};
  std::uniform_int_distribution<std::size_t> pick(0, dens.size() - 1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t da = dens[pick(rng)], db = dens[pick(rng)];
    RationalPoint k;
    k.coords = {Rational(std::uniform_int_distribution<std::int64_t>(-da, da)(rng), da),
                Rational(std::uniform_int_distribution<std::int64_t>(-db, db)(rng), db)};
    const BoundedValue a = amplitude(f, k, n), b = amplitude(f, -k, n);
    o.require(a.lower() == b.lower() && a.upper() == b.upper(), "closed-form amplitude conjugation");
    const std::complex<double> e1 = empirical_amplitude(p, k), e2 = empirical_amplitude(p, -k);
    o.require(std::abs(e1 - std::conj(e2)) < 1e-12, "empirical amplitude conjugation");
  }
  o.detail << lattices << " random lattice pairs, 100 covariogram, 20 pair-count, 40 amplitude checks";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "visible-points density", 5, c1_visible_density},
      {2, "window measure", 1, c2_window_measure},
      {3, "autocorrelation", 30, c3_autocorrelation},
      {4, "amplitudes", 60, c4_amplitudes},
      {5, "off-spectrum vanishing", 60, c5_off_spectrum},
      {6, "two-oracle amplitude consistency", 5, c6_two_oracles},
      {7, "diffraction table over [0,2]^2", 10, c7_spectrum},
      {8, "index formula", 1, c8_index_formula},
      {9, "k-free density", 5, c9_kfree_density},
      {10, "hole construction", 2, c10_holes},
      {11, "patch-frequency consistency", 60, c11_patch_frequencies},
      {12, "property suites", 120, c12_properties},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_s;
    const bool pass = o.ok && in_budget;
    failed += !pass;
    std::printf("%s %2d %s [%.2fs/%gs%s] %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                in_budget ? "" : " over budget", o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
