#include "wmset/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wmset/error.hpp"
#include "wmset/parallel.hpp"
#include "wmset/primes.hpp"

namespace wmset {

namespace {

namespace mp = boost::multiprecision;

constexpr std::size_t kPointsPerBlock = 1 << 14;

bool is_prime_power_preset(const CoprimeFamily& f) { return f.prime_exponent() > 0; }

BigInt floor_rat(const Rational& q) { return floor_div(mp::numerator(q), mp::denominator(q)); }

BigInt ceil_rat(const Rational& q) { return -floor_div(-mp::numerator(q), mp::denominator(q)); }

RationalLattice spectrum_lattice(const CoprimeFamily& f, const SupportSet& support) {
  RationalLattice acc = dual(f.gamma());
  for (std::size_t n : support) acc = sum(acc, dual(f.member(n)));
  return acc;
}

// prod_{n in F} 1 / (1 - index_n)
Rational support_factor(const CoprimeFamily& f, const SupportSet& support) {
  Rational acc(1);
  for (std::size_t n : support) acc /= Rational(1 - f.index(n));
  return acc;
}

Rational relative_intensity(const CoprimeFamily& f, const SupportSet& support) {
  const Rational a = support_factor(f, support);
  return a * a;
}

// exp(-2 pi i r / d) for 0 <= r < d, with exact values at quarter turns.
std::complex<double> unit_root(std::int64_t r, std::int64_t d) {
  const __int128 four_r = static_cast<__int128>(r) * 4;
  const auto quadrant = static_cast<int>(four_r / d);
  const auto rest = static_cast<std::int64_t>(four_r - static_cast<__int128>(quadrant) * d);
  double c = 1.0, s = 0.0;
  if (rest != 0) {
    const double phi = std::numbers::pi / 2.0 * (static_cast<double>(rest) / static_cast<double>(d));
    c = std::cos(phi);
    s = std::sin(phi);
  }
  // rotate (c, s) by quadrant quarter turns
  for (int q = 0; q < quadrant; ++q) {
    const double t = c;
    c = -s;
    s = t;
  }
  return {c, -s};
}

std::int64_t mod64(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

void require_threshold(double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw Error(Errc::InvalidArgument, "threshold must be a positive finite number");
}

// Candidate members for support sets: every n with (index_n - 1)^2 * threshold <= 1,
// ordered by index.
std::vector<std::size_t> candidate_members(const CoprimeFamily& f, const Rational& threshold) {
  std::vector<std::size_t> out;
  auto admissible = [&](std::size_t n) {
    const BigInt t = f.index(n) - 1;
    return Rational(t * t) * threshold <= 1;
  };
  if (f.is_finite()) {
    for (std::size_t n = 0; n < *f.size(); ++n)
      if (admissible(n)) out.push_back(n);
    std::stable_sort(out.begin(), out.end(),
                     [&](std::size_t a, std::size_t b) { return f.index(a) < f.index(b); });
    return out;
  }
  // Indices of the infinite presets increase with n.
  for (std::size_t n = 0; admissible(n); ++n) out.push_back(n);
  return out;
}

// Lattice points (1/D) H c of a rational lattice inside the box, lexicographic in c.
template <class Fn>
void for_each_point_in_box(const RationalLattice& lat, const DualBox& box, Fn&& fn) {
  const std::size_t d = lat.dim();
  const IntMatrix& h = lat.numerators().hnf();
  const Rational den(lat.denominator());
  IntVec c(d);
  RationalPoint k;
  k.coords.assign(d, Rational(0));
  auto rec = [&](auto&& self, std::size_t axis) -> void {
    BigInt partial = 0;
    for (std::size_t j = 0; j < axis; ++j) partial += h(axis, j) * c[j];
    const Rational diag(h(axis, axis));
    const BigInt first = ceil_rat((box.lo[axis] * den - partial) / diag);
    const BigInt last = floor_rat((box.hi[axis] * den - partial) / diag);
    for (BigInt v = first; v <= last; ++v) {
      c[axis] = v;
      k.coords[axis] = Rational(partial + h(axis, axis) * v) / den;
      if (!box.include_upper && k.coords[axis] == box.hi[axis]) continue;
      if (axis + 1 == d)
        fn(k);
      else
        self(self, axis + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace

BigInt RationalPoint::denominator() const {
  BigInt acc = 1;
  for (const Rational& q : coords) acc = lcm(acc, mp::denominator(q));
  return acc;
}

bool RationalPoint::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Rational& q) { return q == 0; });
}

std::string RationalPoint::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ",";
    out += to_string(coords[i]);
  }
  return out + ")";
}

RationalPoint RationalPoint::parse(const std::string& text) {
  RationalPoint k;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const auto slash = item.find('/');
      if (slash == std::string::npos) {
        k.coords.emplace_back(BigInt(item));
      } else {
        const BigInt den(item.substr(slash + 1));
        if (den == 0) throw Error(Errc::InvalidArgument, "zero denominator");
        k.coords.emplace_back(BigInt(item.substr(0, slash)), den);
      }
    } catch (const std::runtime_error&) {
      throw Error(Errc::InvalidArgument, "cannot parse rational coordinate '" + item + "'");
    }
  }
  if (k.coords.empty()) throw Error(Errc::InvalidArgument, "empty rational point");
  return k;
}

RationalPoint operator+(const RationalPoint& a, const RationalPoint& b) {
  if (a.dim() != b.dim()) throw Error(Errc::DimensionMismatch, "rational point dimension");
  RationalPoint out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out.coords[i] += b.coords[i];
  return out;
}

RationalPoint operator-(const RationalPoint& a) {
  RationalPoint out = a;
  for (Rational& q : out.coords) q = -q;
  return out;
}

std::vector<std::string> support_labels(const CoprimeFamily& f, const SupportSet& support) {
  std::vector<std::string> out;
  for (std::size_t n : support)
    out.push_back(is_prime_power_preset(f) ? std::to_string(*f.member_prime(n)) : std::to_string(n + 1));
  return out;
}

SupportSet minimal_support(const CoprimeFamily& f, const RationalPoint& k) {
  if (k.dim() != f.dim()) throw Error(Errc::DimensionMismatch, "frequency dimension");
  if (is_prime_power_preset(f)) {
    SupportSet out;
    for (auto [p, e] : primes::factorize(k.denominator())) {
      if (static_cast<long>(e) > f.prime_exponent())
        throw Error(Errc::NotInSpectrum, k.str() + ": denominator has " + std::to_string(p) + "^" +
                                             std::to_string(e));
      out.push_back(*primes::position(p));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  // Sum lattices satisfy Sigma_F n Sigma_G = Sigma_{F n G}, so greedy removal
  // reaches the unique minimal set.
  SupportSet current(*f.size());
  for (std::size_t n = 0; n < current.size(); ++n) current[n] = n;
  if (!spectrum_lattice(f, current).contains(k.coords))
    throw Error(Errc::NotInSpectrum, k.str() + " is not in the sum of the dual lattices");
  for (std::size_t n = 0; n < *f.size(); ++n) {
    SupportSet trial;
    std::copy_if(current.begin(), current.end(), std::back_inserter(trial),
                 [n](std::size_t m) { return m != n; });
    if (spectrum_lattice(f, trial).contains(k.coords)) current = std::move(trial);
  }
  return current;
}

BoundedValue amplitude(const CoprimeFamily& f, const RationalPoint& k, std::size_t truncation) {
  const SupportSet support = minimal_support(f, k);
  return model_density(f, truncation) * BoundedValue::enclose(support_factor(f, support));
}

Rational amplitude_exact(const CoprimeFamily& f, const RationalPoint& k) {
  if (!f.is_finite()) throw Error(Errc::InvalidArgument, "exact amplitudes need a finite family");
  return truncated_density_exact(f, *f.size()) * support_factor(f, minimal_support(f, k));
}

BoundedValue intensity_visible(const RationalPoint& k) {
  if (k.dim() != 2) throw Error(Errc::DimensionMismatch, "visible points live in Z^2");
  Rational factor(1);
  for (auto [p, e] : primes::factorize(k.denominator())) {
    if (e > 1)
      throw Error(Errc::DenominatorNotSquareFree,
                  k.str() + ": denominator divisible by " + std::to_string(p) + "^2");
    factor /= Rational(1 - BigInt(p) * BigInt(p));
  }
  return square(six_over_pi_squared() * BoundedValue::enclose(factor));
}

std::complex<double> empirical_amplitude(const Patch& p, const RationalPoint& k) {
  if (k.dim() != p.dim()) throw Error(Errc::DimensionMismatch, "frequency dimension");
  if (p.region().volume() == 0.0) throw Error(Errc::InvalidArgument, "empty region");
  const BigInt big_den = k.denominator();
  if (big_den > (BigInt(1) << 62)) throw Error(Errc::InvalidArgument, "frequency denominator too large");
  const std::int64_t den = to_i64(big_den);
  std::vector<std::int64_t> num(k.dim());
  for (std::size_t i = 0; i < k.dim(); ++i)
    num[i] = to_i64(floor_mod(mp::numerator(k.coords[i]) * (big_den / mp::denominator(k.coords[i])), big_den));

  std::vector<std::complex<double>> table;
  if (den <= (1 << 16)) {
    table.resize(static_cast<std::size_t>(den));
    for (std::int64_t r = 0; r < den; ++r) table[static_cast<std::size_t>(r)] = unit_root(r, den);
  }

  const std::size_t blocks = (p.size() + kPointsPerBlock - 1) / kPointsPerBlock;
  std::vector<std::complex<double>> parts(blocks);
  parallel::for_each_block(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(p.size(), (b + 1) * kPointsPerBlock);
    double re = 0.0, im = 0.0;
    for (std::size_t i = b * kPointsPerBlock; i < end; ++i) {
      auto t = p.point(i);
      __int128 phase = 0;
      for (std::size_t j = 0; j < t.size(); ++j)
        phase = (phase + static_cast<__int128>(num[j]) * mod64(t[j], den)) % den;
      const auto r = static_cast<std::int64_t>(phase);
      const std::complex<double> w = table.empty() ? unit_root(r, den) : table[static_cast<std::size_t>(r)];
      re += w.real();
      im += w.imag();
    }
    parts[b] = {re, im};
  });
  const auto total = parallel::tree_reduce(
      std::move(parts), [](const std::complex<double>& a, const std::complex<double>& b) { return a + b; },
      std::complex<double>(0.0, 0.0));
  return total / p.region().volume();
}

Rational inclusion_exclusion_partial(const CoprimeFamily& f, const RationalPoint& k,
                                     std::size_t members) {
  const std::size_t m = f.clamp(members);
  const SupportSet support = minimal_support(f, k);
  if (!support.empty() && support.back() >= m)
    throw Error(Errc::SupportNotCovered, "F_k of " + k.str() + " reaches beyond the first " +
                                             std::to_string(m) + " members");
  // e[j] = j-th elementary symmetric function of 1/index over members outside F_k.
  std::vector<Rational> e{Rational(1)};
  for (std::size_t n = 0; n < m; ++n) {
    if (std::binary_search(support.begin(), support.end(), n)) continue;
    const Rational w(BigInt(1), f.index(n));
    e.push_back(Rational(0));
    for (std::size_t j = e.size() - 1; j > 0; --j) e[j] += e[j - 1] * w;
  }
  Rational alternating(0);
  for (std::size_t j = 0; j < e.size(); ++j) alternating += (j % 2 == 0) ? e[j] : Rational(-e[j]);
  Rational base(BigInt(1), f.gamma().det_abs());
  for (std::size_t n : support) base *= Rational(BigInt(-1), f.index(n));
  return base * alternating;
}

BoundedValue inclusion_exclusion_amplitude(const CoprimeFamily& f, const RationalPoint& k,
                                           std::size_t members) {
  const Rational partial = inclusion_exclusion_partial(f, k, members);
  const double tail = f.tail_index_sum(f.clamp(members));
  const BoundedValue value = BoundedValue::enclose(partial);
  if (tail == 0.0) return value;
  const double low = clamp(BoundedValue::point(1.0) - BoundedValue::point(tail), 0.0, 1.0).lower();
  return value * BoundedValue(low, 1.0);
}

bool DualBox::contains(const RationalPoint& k) const {
  if (k.dim() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (k.coords[i] < lo[i] || k.coords[i] > hi[i]) return false;
    if (!include_upper && k.coords[i] == hi[i]) return false;
  }
  return true;
}

DualBox DualBox::translated(const RationalPoint& v) const {
  DualBox out = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    out.lo[i] += v.coords[i];
    out.hi[i] += v.coords[i];
  }
  return out;
}

namespace {

struct SupportPoints {
  SupportSet support;
  std::vector<RationalPoint> points;
};

std::vector<SupportPoints> enumerate_support(const CoprimeFamily& f, const DualBox& region,
                                             double threshold) {
  require_threshold(threshold);
  if (region.lo.size() != f.dim() || region.hi.size() != f.dim())
    throw Error(Errc::DimensionMismatch, "dual box dimension");
  const Rational thr(threshold);
  const std::vector<std::size_t> candidates = candidate_members(f, thr);

  std::vector<SupportPoints> out;
  SupportSet chosen;
  auto visit = [&](const SupportSet& ordered) {
    SupportPoints sp;
    sp.support = ordered;
    std::sort(sp.support.begin(), sp.support.end());
    const RationalLattice lat = spectrum_lattice(f, sp.support);
    std::vector<RationalLattice> smaller;
    for (std::size_t n : sp.support) {
      SupportSet rest;
      std::copy_if(sp.support.begin(), sp.support.end(), std::back_inserter(rest),
                   [n](std::size_t m) { return m != n; });
      smaller.push_back(spectrum_lattice(f, rest));
    }
    for_each_point_in_box(lat, region, [&](const RationalPoint& k) {
      for (const RationalLattice& s : smaller)
        if (s.contains(k.coords)) return;
      sp.points.push_back(k);
    });
    out.push_back(std::move(sp));
  };
  auto dfs = [&](auto&& self, std::size_t start, const Rational& weight) -> void {
    visit(chosen);
    for (std::size_t j = start; j < candidates.size(); ++j) {
      const BigInt t = f.index(candidates[j]) - 1;
      const Rational next = weight * Rational(t * t);
      if (next * thr > 1) break;
      chosen.push_back(candidates[j]);
      self(self, j + 1, next);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0, Rational(1));
  return out;
}

}  // namespace

std::vector<RationalPoint> spectral_support(const CoprimeFamily& f, const DualBox& region,
                                            double threshold) {
  std::vector<RationalPoint> out;
  for (auto& sp : enumerate_support(f, region, threshold))
    out.insert(out.end(), sp.points.begin(), sp.points.end());
  std::sort(out.begin(), out.end());
  return out;
}

SpectrumTable spectrum_table(const CoprimeFamily& f, const DualBox& region, double threshold,
                             std::size_t truncation) {
  SpectrumTable table;
  table.region = region;
  table.threshold = threshold;
  const BoundedValue density = model_density(f, truncation);
  for (auto& sp : enumerate_support(f, region, threshold)) {
    const Rational factor = support_factor(f, sp.support);
    const BoundedValue amp = density * BoundedValue::enclose(factor);
    const BoundedValue intensity = square(amp);
    const Rational rel = relative_intensity(f, sp.support);
    for (RationalPoint& k : sp.points)
      table.lines.push_back(SpectralLine{std::move(k), sp.support, amp, intensity, rel});
  }
  std::sort(table.lines.begin(), table.lines.end(), [](const SpectralLine& a, const SpectralLine& b) {
    if (a.relative_intensity != b.relative_intensity) return a.relative_intensity > b.relative_intensity;
    return a.k < b.k;
  });
  return table;
}

}  // namespace wmset
