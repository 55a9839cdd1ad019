#pragma once

// Finite patches of the point set Gamma \ (Gamma_1 u Gamma_2 u ...): generation on
// boxes and balls, density estimates along growing regions, and holes built by
// the Chinese remainder theorem.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wmset/family.hpp"
#include "wmset/interval.hpp"

namespace wmset {

enum class Shape { Box, Ball };

const char* to_string(Shape s);

/// Averaging region in Z^d: an axis-aligned box or a closed Euclidean ball
/// |x - center|^2 <= radius^2. Its volume is always the number of Z^d points
/// it contains, so box and ball densities are directly comparable.
class Region {
 public:
  Region() = default;
  static Region box(std::vector<std::int64_t> center, std::int64_t radius);
  static Region ball(std::vector<std::int64_t> center, std::int64_t radius);
  /// Box with explicit inclusive bounds [lo_i, hi_i].
  static Region range(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi);
  static Region centered(Shape shape, std::size_t dim, std::int64_t radius);

  Shape shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return lo_.size(); }
  const std::vector<std::int64_t>& center() const noexcept { return center_; }
  std::int64_t radius() const noexcept { return radius_; }
  /// Inclusive bounding box.
  const std::vector<std::int64_t>& lo() const noexcept { return lo_; }
  const std::vector<std::int64_t>& hi() const noexcept { return hi_; }

  std::uint64_t point_count() const noexcept { return count_; }
  double volume() const noexcept { return static_cast<double>(count_); }

  bool contains(std::span<const std::int64_t> x) const;

  /// Region of translations t with t + B_by(0) inside this region.
  Region shrunk(std::int64_t by) const;

  /// Visits every lattice point in lexicographic order.
  template <class Fn>
  void for_each_point(Fn&& fn) const {
    if (dim() > 0) for_each_point_in_rows(lo_[0], hi_[0], fn);
  }

  /// Same, restricted to first coordinates in [first, last].
  template <class Fn>
  void for_each_point_in_rows(std::int64_t first, std::int64_t last, Fn&& fn) const {
    std::vector<std::int64_t> x(dim());
    auto [a, b] = axis_range(0, {});
    for (std::int64_t v = std::max(a, first); v <= std::min(b, last); ++v) {
      x[0] = v;
      if (dim() == 1)
        fn(std::span<const std::int64_t>(x));
      else
        visit(1, x, fn);
    }
  }

  /// [first, last] range of coordinate `axis` for fixed leading coordinates.
  std::pair<std::int64_t, std::int64_t> axis_range(std::size_t axis,
                                                   std::span<const std::int64_t> leading) const;

 private:
  void finish();

  template <class Fn>
  void visit(std::size_t axis, std::vector<std::int64_t>& x, Fn& fn) const {
    auto [a, b] = axis_range(axis, std::span<const std::int64_t>(x.data(), axis));
    for (std::int64_t v = a; v <= b; ++v) {
      x[axis] = v;
      if (axis + 1 == dim())
        fn(std::span<const std::int64_t>(x));
      else
        visit(axis + 1, x, fn);
    }
  }

  Shape shape_ = Shape::Box;
  std::vector<std::int64_t> center_;
  std::int64_t radius_ = 0;
  std::vector<std::int64_t> lo_, hi_;
  std::uint64_t count_ = 0;
};

/// Finite point set with the region it was cut from. Points are stored flat,
/// `dim` coordinates per point, strictly increasing in lexicographic order.
class Patch {
 public:
  Patch(Region region, CanonicalLattice gamma, std::string family_tag,
        std::vector<std::int64_t> coords);

  std::size_t dim() const noexcept { return region_.dim(); }
  std::size_t size() const noexcept { return coords_.size() / dim(); }
  bool empty() const noexcept { return coords_.empty(); }
  std::span<const std::int64_t> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }
  const std::vector<std::int64_t>& coords() const noexcept { return coords_; }

  const Region& region() const noexcept { return region_; }
  const CanonicalLattice& gamma() const noexcept { return gamma_; }
  const std::string& family_tag() const noexcept { return family_tag_; }

  /// Binary search; O(d log n).
  bool contains(std::span<const std::int64_t> x) const;

 private:
  Region region_;
  CanonicalLattice gamma_;
  std::string family_tag_;
  std::vector<std::int64_t> coords_;
};

/// Dense occupancy bitmap over a patch's bounding box, for O(1) lookups.
class PatchBitmap {
 public:
  explicit PatchBitmap(const Patch& p);
  bool test(std::span<const std::int64_t> x) const;

 private:
  std::vector<std::int64_t> lo_, hi_;
  std::vector<std::uint64_t> stride_;
  std::vector<bool> bits_;
};

struct DensityEstimate {
  std::uint64_t count = 0;
  double volume = 0.0;
  double value = 0.0;
  Region region;
};

struct DensitySequence {
  std::vector<DensityEstimate> estimates;
  std::vector<double> running_min;
  std::vector<double> running_max;
};

/// Points of Gamma inside r that lie in none of the first N members.
/// A superset of the true point set; the excess density is at most
/// tail_density_bound(f, N).
Patch generate(const CoprimeFamily& f, const Region& r, std::size_t truncation);

/// Exact visible points {gcd(x, y) = 1} of Z^2 inside r.
Patch generate_visible(const Region& r);

/// Exact k-th power-free integers in r (zero excluded); throws BadExponent for k < 2.
Patch generate_kfree(long k, const Region& r);

DensityEstimate density_estimate(const Patch& p);

DensitySequence density_sequence(const CoprimeFamily& f, std::span<const std::int64_t> radii,
                                 std::size_t truncation, Shape shape = Shape::Box);

struct MaximalityEntry {
  DensityEstimate estimate;
  double distance = 0.0;  // from the estimate to the target interval
  double margin = 0.0;    // tolerance - distance
  bool consistent = false;
};

struct MaximalityReport {
  BoundedValue model_density;
  double tail_bound = 0.0;
  BoundedValue target;  // model_density widened by tail_bound
  double tolerance = 0.0;
  std::vector<MaximalityEntry> entries;
  bool consistent = false;
  std::string footnote;
};

/// Compares empirical densities of the truncated set against the model
/// density; throws NoTailBound when the family has no certified tail.
MaximalityReport maximality_report(const CoprimeFamily& f, std::span<const std::int64_t> radii,
                                   std::size_t truncation, double tolerance,
                                   Shape shape = Shape::Box);

struct HoleWitness {
  IntVec offset;
  IntVec point;        // t + offset
  std::size_t member;  // zero-based member containing `point`
};

struct Hole {
  IntVec t;
  std::vector<HoleWitness> witnesses;
};

/// A translation t such that t + ([-m, m]^d n Gamma) misses the point set,
/// built by assigning one member to every offset and solving the congruences
/// t = -offset (mod member). Verified before returning.
Hole find_hole(const CoprimeFamily& f, std::int64_t m);

/// Solves x = a (mod first), x = b (mod second) for coprime first + second = gamma.
/// Returns the representative reduced modulo first n second.
IntVec crt_solve(const CanonicalLattice& gamma, const CanonicalLattice& first, const IntVec& a,
                 const CanonicalLattice& second, const IntVec& b);

}  // namespace wmset
