#include "wmset/pointset.hpp"

#include <cmath>
#include <numeric>

#include "wmset/error.hpp"
#include "wmset/parallel.hpp"
#include "wmset/primes.hpp"

namespace wmset {

namespace {

constexpr std::int64_t kRowsPerBlock = 32;

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

// Lattice membership on machine integers, by back-substitution on the HNF.
class SmallLattice {
 public:
  explicit SmallLattice(const CanonicalLattice& lat) : d_(lat.dim()), h_(d_ * d_) {
    for (std::size_t r = 0; r < d_; ++r)
      for (std::size_t c = 0; c < d_; ++c) {
        if (!fits_i64(lat.hnf()(r, c)))
          throw Error(Errc::InvalidArgument, "lattice entries exceed 64-bit range");
        h_[r * d_ + c] = to_i64(lat.hnf()(r, c));
      }
    identity_ = lat == CanonicalLattice::identity(d_);
  }

  bool is_identity() const noexcept { return identity_; }

  bool contains(std::span<const std::int64_t> x) const {
    if (identity_) return true;
    __int128 rest[3];
    std::vector<__int128> big;
    __int128* r = rest;
    if (d_ > 3) {
      big.resize(d_);
      r = big.data();
    }
    for (std::size_t i = 0; i < d_; ++i) r[i] = x[i];
    for (std::size_t i = 0; i < d_; ++i) {
      const std::int64_t diag = h_[i * d_ + i];
      if (r[i] % diag != 0) return false;
      const __int128 c = r[i] / diag;
      for (std::size_t k = i; k < d_; ++k) r[k] -= c * h_[k * d_ + i];
    }
    return true;
  }

 private:
  std::size_t d_;
  std::vector<std::int64_t> h_;
  bool identity_ = false;
};

// Decides whether a point of gamma lies in one of the first N members.
class Excluder {
 public:
  Excluder(const CoprimeFamily& f, std::size_t truncation, std::int64_t max_abs) {
    const std::size_t n_max = f.clamp(truncation);
    if (f.prime_exponent() > 0) {
      // p^s | gcd(x) with gcd(x) <= max_abs; larger moduli can only contain 0.
      exponent_ = f.prime_exponent();
      for (std::size_t n = 0; n < n_max; ++n) {
        const BigInt m = f.scalar_modulus(n);
        if (m > max_abs) break;
        largest_prime_ = *f.member_prime(n);
        moduli_.push_back(to_i64(m));
      }
      if (moduli_.size() > 64 && max_abs <= (std::int64_t{1} << 26)) {
        mode_ = Mode::Factor;
        build_spf(max_abs);
      } else {
        mode_ = Mode::Scalar;
      }
      return;
    }
    bool scalar = true;
    for (std::size_t n = 0; n < n_max && scalar; ++n) {
      const BigInt m = f.scalar_modulus(n);
      if (m == 0) scalar = false;
      else if (m <= max_abs) moduli_.push_back(to_i64(m));
    }
    if (scalar) {
      mode_ = Mode::Scalar;
      return;
    }
    mode_ = Mode::General;
    moduli_.clear();
    for (std::size_t n = 0; n < n_max; ++n) members_.emplace_back(f.member(n));
  }

  bool excluded(std::span<const std::int64_t> x) const {
    if (mode_ == Mode::General) {
      for (const auto& m : members_)
        if (m.contains(x)) return true;
      return false;
    }
    std::int64_t g = 0;
    for (std::int64_t v : x) g = std::gcd(g, abs64(v));
    if (g == 0) return true;
    if (mode_ == Mode::Scalar) {
      for (std::int64_t m : moduli_)
        if (g % m == 0) return true;
      return false;
    }
    while (g > 1) {
      const std::int64_t p = spf_[static_cast<std::size_t>(g)];
      int e = 0;
      while (g % p == 0) {
        g /= p;
        ++e;
      }
      if (e >= exponent_ && static_cast<std::uint64_t>(p) <= largest_prime_) return true;
    }
    return false;
  }

 private:
  enum class Mode { Scalar, Factor, General };

  void build_spf(std::int64_t n) {
    spf_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::int64_t i = 2; i <= n; ++i) {
      if (spf_[static_cast<std::size_t>(i)] != 0) continue;
      for (std::int64_t j = i; j <= n; j += i)
        if (spf_[static_cast<std::size_t>(j)] == 0) spf_[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(i);
    }
  }

  Mode mode_ = Mode::Scalar;
  long exponent_ = 0;
  std::uint64_t largest_prime_ = 0;
  std::vector<std::int64_t> moduli_;
  std::vector<std::uint32_t> spf_;
  std::vector<SmallLattice> members_;
};

std::int64_t max_abs_coordinate(const Region& r) {
  std::int64_t m = 0;
  for (std::size_t i = 0; i < r.dim(); ++i) m = std::max({m, abs64(r.lo()[i]), abs64(r.hi()[i])});
  return m;
}

// Collects points accepted by `keep`, row blocks in parallel, merged in order.
template <class Keep>
std::vector<std::int64_t> collect(const Region& r, Keep keep) {
  if (r.dim() == 0 || r.point_count() == 0) return {};
  const std::int64_t first = r.lo()[0];
  const std::int64_t rows = r.hi()[0] - first + 1;
  const auto blocks = static_cast<std::size_t>((rows + kRowsPerBlock - 1) / kRowsPerBlock);
  std::vector<std::vector<std::int64_t>> parts(blocks);
  parallel::for_each_block(blocks, [&](std::size_t b) {
    const std::int64_t a = first + static_cast<std::int64_t>(b) * kRowsPerBlock;
    auto& out = parts[b];
    r.for_each_point_in_rows(a, a + kRowsPerBlock - 1, [&](std::span<const std::int64_t> x) {
      if (keep(x)) out.insert(out.end(), x.begin(), x.end());
    });
  });
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<std::int64_t> coords;
  coords.reserve(total);
  for (auto& p : parts) coords.insert(coords.end(), p.begin(), p.end());
  return coords;
}

}  // namespace

const char* to_string(Shape s) { return s == Shape::Box ? "box" : "ball"; }

Region Region::box(std::vector<std::int64_t> center, std::int64_t radius) {
  if (radius < 0) throw Error(Errc::InvalidArgument, "radius must be non-negative");
  if (center.empty()) throw Error(Errc::InvalidArgument, "region dimension must be >= 1");
  Region r;
  r.shape_ = Shape::Box;
  r.radius_ = radius;
  for (std::int64_t c : center) {
    r.lo_.push_back(c - radius);
    r.hi_.push_back(c + radius);
  }
  r.center_ = std::move(center);
  r.finish();
  return r;
}

Region Region::ball(std::vector<std::int64_t> center, std::int64_t radius) {
  Region r = box(std::move(center), radius);
  r.shape_ = Shape::Ball;
  r.finish();
  return r;
}

Region Region::range(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw Error(Errc::DimensionMismatch, "range bounds must have equal, positive dimension");
  Region r;
  r.shape_ = Shape::Box;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) throw Error(Errc::InvalidArgument, "empty range");
    r.center_.push_back(lo[i] + (hi[i] - lo[i]) / 2);
    r.radius_ = std::max(r.radius_, (hi[i] - lo[i]) / 2);
  }
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  r.finish();
  return r;
}

Region Region::centered(Shape shape, std::size_t dim, std::int64_t radius) {
  std::vector<std::int64_t> c(dim, 0);
  return shape == Shape::Box ? box(std::move(c), radius) : ball(std::move(c), radius);
}

void Region::finish() {
  if (shape_ == Shape::Box) {
    count_ = 1;
    for (std::size_t i = 0; i < dim(); ++i) count_ *= static_cast<std::uint64_t>(hi_[i] - lo_[i] + 1);
    return;
  }
  count_ = 0;
  std::vector<std::int64_t> x(dim());
  // Count whole rows of the last axis at once.
  auto count_rows = [&](auto&& self, std::size_t axis) -> void {
    auto [a, b] = axis_range(axis, std::span<const std::int64_t>(x.data(), axis));
    if (axis + 1 == dim()) {
      if (b >= a) count_ += static_cast<std::uint64_t>(b - a + 1);
      return;
    }
    for (std::int64_t v = a; v <= b; ++v) {
      x[axis] = v;
      self(self, axis + 1);
    }
  };
  count_rows(count_rows, 0);
}

std::pair<std::int64_t, std::int64_t> Region::axis_range(
    std::size_t axis, std::span<const std::int64_t> leading) const {
  if (shape_ == Shape::Box) return {lo_[axis], hi_[axis]};
  std::int64_t rem = radius_ * radius_;
  for (std::size_t j = 0; j < axis; ++j) {
    const std::int64_t dx = leading[j] - center_[j];
    rem -= dx * dx;
  }
  const std::int64_t w = isqrt(rem);
  if (w < 0) return {1, 0};
  return {center_[axis] - w, center_[axis] + w};
}

bool Region::contains(std::span<const std::int64_t> x) const {
  if (x.size() != dim()) throw Error(Errc::DimensionMismatch, "point dimension");
  for (std::size_t i = 0; i < dim(); ++i)
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  if (shape_ == Shape::Box) return true;
  std::int64_t s = 0;
  for (std::size_t i = 0; i < dim(); ++i) s += (x[i] - center_[i]) * (x[i] - center_[i]);
  return s <= radius_ * radius_;
}

Region Region::shrunk(std::int64_t by) const {
  if (by < 0) throw Error(Errc::InvalidArgument, "shrink amount must be non-negative");
  if (shape_ == Shape::Ball) {
    if (radius_ < by) throw Error(Errc::PatternLargerThanRegion, "region too small to shrink");
    return ball(center_, radius_ - by);
  }
  std::vector<std::int64_t> lo = lo_, hi = hi_;
  for (std::size_t i = 0; i < dim(); ++i) {
    lo[i] += by;
    hi[i] -= by;
    if (hi[i] < lo[i]) throw Error(Errc::PatternLargerThanRegion, "region too small to shrink");
  }
  Region r = range(std::move(lo), std::move(hi));
  r.center_ = center_;
  r.radius_ = radius_ - by;
  return r;
}

Patch::Patch(Region region, CanonicalLattice gamma, std::string family_tag,
             std::vector<std::int64_t> coords)
    : region_(std::move(region)),
      gamma_(std::move(gamma)),
      family_tag_(std::move(family_tag)),
      coords_(std::move(coords)) {
  if (gamma_.dim() != region_.dim()) throw Error(Errc::DimensionMismatch, "patch gamma vs region");
  if (coords_.size() % dim() != 0) throw Error(Errc::InvalidArgument, "ragged coordinate array");
}

bool Patch::contains(std::span<const std::int64_t> x) const {
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto p = point(mid);
    if (std::lexicographical_compare(p.begin(), p.end(), x.begin(), x.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo < size() && std::equal(x.begin(), x.end(), point(lo).begin());
}

PatchBitmap::PatchBitmap(const Patch& p)
    : lo_(p.region().lo()), hi_(p.region().hi()), stride_(p.dim()) {
  std::uint64_t total = 1;
  for (std::size_t i = p.dim(); i-- > 0;) {
    stride_[i] = total;
    total *= static_cast<std::uint64_t>(hi_[i] - lo_[i] + 1);
  }
  bits_.assign(total, false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto x = p.point(i);
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) idx += static_cast<std::uint64_t>(x[k] - lo_[k]) * stride_[k];
    bits_[idx] = true;
  }
}

bool PatchBitmap::test(std::span<const std::int64_t> x) const {
  std::uint64_t idx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < lo_[k] || x[k] > hi_[k]) return false;
    idx += static_cast<std::uint64_t>(x[k] - lo_[k]) * stride_[k];
  }
  return bits_[idx];
}

Patch generate(const CoprimeFamily& f, const Region& r, std::size_t truncation) {
  if (truncation < 1) throw Error(Errc::InvalidArgument, "truncation level must be >= 1");
  if (r.dim() != f.dim()) throw Error(Errc::DimensionMismatch, "region vs family dimension");
  const SmallLattice gamma(f.gamma());
  const Excluder excluder(f, truncation, max_abs_coordinate(r));
  auto coords = collect(r, [&](std::span<const std::int64_t> x) {
    return gamma.contains(x) && !excluder.excluded(x);
  });
  return Patch(r, f.gamma(), f.describe(), std::move(coords));
}

Patch generate_visible(const Region& r) {
  if (r.dim() != 2) throw Error(Errc::DimensionMismatch, "visible points live in Z^2");
  auto coords = collect(r, [](std::span<const std::int64_t> x) {
    return std::gcd(abs64(x[0]), abs64(x[1])) == 1;
  });
  return Patch(r, CanonicalLattice::identity(2), "visible-d2", std::move(coords));
}

Patch generate_kfree(long k, const Region& r) {
  if (k < 2) throw Error(Errc::BadExponent, "k-free integers need k >= 2, got " + std::to_string(k));
  if (r.dim() != 1) throw Error(Errc::DimensionMismatch, "k-free integers live in Z");
  const std::int64_t n = max_abs_coordinate(r);
  // free[m]: |m| has no k-th power prime divisor.
  std::vector<bool> is_free(static_cast<std::size_t>(n) + 1, true);
  for (std::uint64_t p : primes::up_to(static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k)) + 1)) {
    std::int64_t pk = 1;
    bool overflow = false;
    for (long i = 0; i < k && !overflow; ++i) {
      if (pk > n / static_cast<std::int64_t>(p)) overflow = true;
      else pk *= static_cast<std::int64_t>(p);
    }
    if (overflow) continue;
    for (std::int64_t m = pk; m <= n; m += pk) is_free[static_cast<std::size_t>(m)] = false;
  }
  std::vector<std::int64_t> coords;
  for (std::int64_t m = r.lo()[0]; m <= r.hi()[0]; ++m)
    if (m != 0 && is_free[static_cast<std::size_t>(abs64(m))]) coords.push_back(m);
  return Patch(r, CanonicalLattice::identity(1), "kfree(k=" + std::to_string(k) + ")",
               std::move(coords));
}

DensityEstimate density_estimate(const Patch& p) {
  if (p.region().point_count() == 0) throw Error(Errc::InvalidArgument, "empty region");
  DensityEstimate e;
  e.count = p.size();
  e.volume = p.region().volume();
  e.value = static_cast<double>(e.count) / e.volume;
  e.region = p.region();
  return e;
}

DensitySequence density_sequence(const CoprimeFamily& f, std::span<const std::int64_t> radii,
                                 std::size_t truncation, Shape shape) {
  DensitySequence seq;
  for (std::int64_t radius : radii) {
    seq.estimates.push_back(density_estimate(generate(f, Region::centered(shape, f.dim(), radius), truncation)));
    const double v = seq.estimates.back().value;
    seq.running_min.push_back(seq.running_min.empty() ? v : std::min(seq.running_min.back(), v));
    seq.running_max.push_back(seq.running_max.empty() ? v : std::max(seq.running_max.back(), v));
  }
  return seq;
}

MaximalityReport maximality_report(const CoprimeFamily& f, std::span<const std::int64_t> radii,
                                   std::size_t truncation, double tolerance, Shape shape) {
  MaximalityReport rep;
  rep.tail_bound = tail_density_bound(f, truncation);
  rep.model_density = model_density(f, truncation);
  rep.target = rep.model_density.widened(rep.tail_bound);
  rep.tolerance = tolerance;
  rep.consistent = true;
  for (const DensityEstimate& e : density_sequence(f, radii, truncation, shape).estimates) {
    MaximalityEntry entry;
    entry.estimate = e;
    if (e.value < rep.target.lower()) entry.distance = rep.target.lower() - e.value;
    else if (e.value > rep.target.upper()) entry.distance = e.value - rep.target.upper();
    entry.margin = tolerance - entry.distance;
    entry.consistent = entry.margin >= 0.0;
    rep.consistent = rep.consistent && entry.consistent;
    rep.entries.push_back(std::move(entry));
  }
  if (shape == Shape::Box && !f.is_finite())
    rep.footnote =
        "box averaging: for sets with arbitrarily large holes, densities along non-disc shapes "
        "are tied densities, which are not modeled here";
  return rep;
}

IntVec crt_solve(const CanonicalLattice& gamma, const CanonicalLattice& first, const IntVec& a,
                 const CanonicalLattice& second, const IntVec& b) {
  const std::size_t d = gamma.dim();
  IntMatrix stacked(d, 2 * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      stacked(r, c) = first.hnf()(r, c);
      stacked(r, d + c) = second.hnf()(r, c);
    }
  HnfDecomposition dec = hnf_with_transform(stacked);
  if (!(dec.h == gamma.hnf())) throw Error(Errc::NotCoprime, "CRT moduli are not coprime in gamma");

  IntVec diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = b[i] - a[i];
  // diff = h c; the first d transform columns map c to (u, v) with first*u + second*v = diff.
  const IntVec c = coordinates(gamma, diff);
  IntVec x = a;
  for (std::size_t r = 0; r < d; ++r) {
    BigInt u = 0;
    for (std::size_t k = 0; k < d; ++k) u += dec.transform(r, k) * c[k];
    for (std::size_t i = 0; i < d; ++i) x[i] += first.hnf()(i, r) * u;
  }
  return reduce(intersect(first, second), std::move(x));
}

Hole find_hole(const CoprimeFamily& f, std::int64_t m) {
  if (m < 0) throw Error(Errc::InvalidArgument, "hole half-width must be >= 0");
  const std::size_t d = f.dim();
  std::vector<IntVec> offsets;
  Region::box(std::vector<std::int64_t>(d, 0), m).for_each_point([&](std::span<const std::int64_t> o) {
    IntVec v(o.begin(), o.end());
    if (contains(f.gamma(), v)) offsets.push_back(std::move(v));
  });
  if (f.is_finite() && *f.size() < offsets.size()) {
    throw Error(Errc::NotEnoughMembers, "need " + std::to_string(offsets.size()) +
                                            " members, family has " + std::to_string(*f.size()));
  }

  Hole hole;
  IntVec t(d, 0);
  CanonicalLattice period = f.gamma();
  for (std::size_t n = 0; n < offsets.size(); ++n) {
    IntVec target(d);
    for (std::size_t i = 0; i < d; ++i) target[i] = -offsets[n][i];
    const CanonicalLattice member = f.member(n);
    t = crt_solve(f.gamma(), period, t, member, target);
    period = intersect(period, member);
  }
  for (std::size_t n = 0; n < offsets.size(); ++n) {
    IntVec point(d);
    for (std::size_t i = 0; i < d; ++i) point[i] = t[i] + offsets[n][i];
    if (!f.is_member(n, point))
      throw Error(Errc::VerificationFailed, "hole point escaped its assigned member");
    hole.witnesses.push_back(HoleWitness{offsets[n], std::move(point), n});
  }
  hole.t = std::move(t);
  return hole;
}

}  // namespace wmset
