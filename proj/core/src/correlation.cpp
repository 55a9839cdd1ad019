#include "wmset/correlation.hpp"

#include "wmset/error.hpp"
#include "wmset/parallel.hpp"

namespace wmset {

namespace {

constexpr std::size_t kPointsPerBlock = 1 << 14;

bool is_zero(const Shift& z) {
  return std::all_of(z.begin(), z.end(), [](std::int64_t v) { return v == 0; });
}

// Number of region points x with x - z also in the region.
std::uint64_t overlap_count(const Region& r, const Shift& z) {
  if (r.shape() == Shape::Box) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < r.dim(); ++i) {
      const std::int64_t side = r.hi()[i] - r.lo()[i] + 1;
      const std::int64_t s = side - (z[i] < 0 ? -z[i] : z[i]);
      if (s <= 0) return 0;
      n *= static_cast<std::uint64_t>(s);
    }
    return n;
  }
  std::uint64_t n = 0;
  Shift y(r.dim());
  r.for_each_point([&](std::span<const std::int64_t> x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - z[i];
    if (r.contains(y)) ++n;
  });
  return n;
}

}  // namespace

AutocorrTable empirical_autocorr(const Patch& p, const std::vector<Shift>& shifts) {
  for (const Shift& z : shifts) {
    if (z.size() != p.dim()) throw Error(Errc::DimensionMismatch, "shift dimension");
    if (!contains(p.gamma(), to_intvec(z)))
      throw Error(Errc::ShiftNotInGamma, "shift is not a vector of gamma");
  }
  AutocorrTable table;
  table.region = p.region();
  table.volume = p.region().volume();
  if (table.volume == 0.0) throw Error(Errc::InvalidArgument, "empty region");

  const PatchBitmap bitmap(p);
  const std::size_t blocks = (p.size() + kPointsPerBlock - 1) / kPointsPerBlock;
  for (const Shift& z : shifts) {
    std::vector<std::uint64_t> counts(blocks, 0);
    parallel::for_each_block(blocks, [&](std::size_t b) {
      Shift y(p.dim());
      const std::size_t end = std::min(p.size(), (b + 1) * kPointsPerBlock);
      std::uint64_t c = 0;
      for (std::size_t i = b * kPointsPerBlock; i < end; ++i) {
        auto x = p.point(i);
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] - z[k];
        if (bitmap.test(y)) ++c;
      }
      counts[b] = c;
    });
    AutocorrEntry e;
    e.z = z;
    for (std::uint64_t c : counts) e.pair_count += c;
    e.empirical = static_cast<double>(e.pair_count) / table.volume;
    table.entries.push_back(std::move(e));
  }
  return table;
}

BoundedValue theoretical_autocorr(const CoprimeFamily& f, const Shift& z, std::size_t truncation) {
  if (z.size() != f.dim()) throw Error(Errc::DimensionMismatch, "shift dimension");
  return covariogram(f, to_intvec(z), truncation) *
         BoundedValue::enclose(Rational(BigInt(1), f.gamma().det_abs()));
}

Rational theoretical_autocorr_exact(const CoprimeFamily& f, const Shift& z, std::size_t truncation) {
  if (truncation < 1) throw Error(Errc::InvalidArgument, "truncation level must be >= 1");
  if (z.size() != f.dim()) throw Error(Errc::DimensionMismatch, "shift dimension");
  const IntVec zz = to_intvec(z);
  if (!contains(f.gamma(), zz)) throw Error(Errc::NotInGamma, "shift must lie in gamma");
  Rational acc(BigInt(1), f.gamma().det_abs());
  for (std::size_t n = 0; n < f.clamp(truncation); ++n)
    acc *= Rational(1) - Rational(BigInt(f.is_member(n, zz) ? 1 : 2), f.index(n));
  return acc;
}

Rational periodic_autocorr(const CoprimeFamily& f, const Shift& z, std::uint64_t max_period) {
  if (!f.is_finite()) throw Error(Errc::InvalidArgument, "periodic autocorrelation needs a finite family");
  if (z.size() != f.dim()) throw Error(Errc::DimensionMismatch, "shift dimension");
  if (!contains(f.gamma(), to_intvec(z))) throw Error(Errc::NotInGamma, "shift must lie in gamma");
  const std::size_t d = f.dim();
  CanonicalLattice period = f.gamma();
  for (std::size_t n = 0; n < *f.size(); ++n) period = intersect(period, f.member(n));
  if (period.det_abs() > max_period) throw Error(Errc::InvalidArgument, "period too large");

  // The diagonal box prod [0, h_ii) is a transversal of Z^d / period.
  std::vector<std::int64_t> hi(d);
  for (std::size_t i = 0; i < d; ++i) hi[i] = to_i64(period.hnf()(i, i)) - 1;
  auto in_set = [&](const IntVec& x) {
    if (!contains(f.gamma(), x)) return false;
    for (std::size_t n = 0; n < *f.size(); ++n)
      if (f.is_member(n, x)) return false;
    return true;
  };
  BigInt pairs = 0;
  IntVec x(d), y(d);
  Region::range(std::vector<std::int64_t>(d, 0), hi).for_each_point([&](std::span<const std::int64_t> p) {
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = p[i];
      y[i] = p[i] - z[i];
    }
    if (in_set(x) && in_set(y)) ++pairs;
  });
  return Rational(pairs, period.det_abs());
}

AutocorrTable autocorr_table(const CoprimeFamily& f, const Patch& p, const std::vector<Shift>& shifts,
                             std::size_t truncation) {
  AutocorrTable table = empirical_autocorr(p, shifts);
  table.truncation = truncation;
  for (AutocorrEntry& e : table.entries) e.theoretical = theoretical_autocorr(f, e.z, truncation);
  return table;
}

SandwichReport sandwich_check(const CoprimeFamily& f, const AutocorrTable& table,
                              double density_tolerance) {
  const std::size_t n = table.truncation == 0 ? 1 : table.truncation;
  const double density_upper = model_density(f, n).upper();
  const double tail = tail_density_bound(f, n);
  SandwichReport rep;
  rep.ok = true;
  bool first = true;
  for (const AutocorrEntry& e : table.entries) {
    SandwichEntry s;
    s.z = e.z;
    s.empirical = e.empirical;
    s.upper = (e.theoretical ? *e.theoretical : theoretical_autocorr(f, e.z, n)).upper();
    if (is_zero(e.z)) {
      s.slack = density_tolerance + tail;
    } else {
      const double boundary =
          (table.volume - static_cast<double>(overlap_count(table.region, e.z))) / table.volume;
      s.slack = boundary * density_upper + tail;
    }
    s.margin = s.upper + s.slack - s.empirical;
    s.ok = s.empirical >= 0.0 && s.margin >= 0.0;
    rep.ok = rep.ok && s.ok;
    rep.worst_margin = first ? s.margin : std::min(rep.worst_margin, s.margin);
    first = false;
    rep.entries.push_back(std::move(s));
  }
  return rep;
}

}  // namespace wmset
