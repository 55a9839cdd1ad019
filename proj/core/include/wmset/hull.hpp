#pragma once

// Finite-scale face of the hull: the coset-missing test for patches and the
// frequencies of local patterns, counted on patches and computed exactly by
// the Chinese remainder theorem.

#include <cstdint>
#include <optional>
#include <vector>

#include "wmset/family.hpp"
#include "wmset/interval.hpp"
#include "wmset/pointset.hpp"

namespace wmset {

struct CosetWitness {
  std::uint64_t prime = 0;
  std::vector<std::int64_t> coset;  // representative in [0, p)^d of a coset of p Z^d missed by the patch
};

struct Admissibility {
  bool admissible = false;
  std::vector<CosetWitness> witnesses;      // one per prime checked, up to the first failure
  std::optional<std::uint64_t> failing_prime;  // first prime whose cosets are all occupied
};

/// For every prime p <= prime_bound, looks for a coset of p Z^d that contains
/// no patch point. Every patch of the visible points passes.
Admissibility admissible(const Patch& p, std::uint64_t prime_bound);

/// Constraints on (V - t) n B_rho(0): listed points must be occupied or empty,
/// unlisted ball points are unconstrained.
struct PatchPattern {
  std::int64_t rho = 0;
  std::vector<std::vector<std::int64_t>> occupied;
  std::vector<std::vector<std::int64_t>> empty;

  std::size_t dim() const;
  std::size_t size() const noexcept { return occupied.size() + empty.size(); }
  /// Throws InvalidPattern: points outside the ball, repeated points, a point
  /// both occupied and empty, mixed dimensions, or rho < 0.
  void validate() const;
};

/// Lattice points of the closed ball of radius rho around 0 in Z^d, lexicographic.
std::vector<std::vector<std::int64_t>> ball_points(std::int64_t rho, std::size_t dim);

/// Fraction of translations t in Gamma n region.shrunk(rho) whose neighbourhood
/// matches the pattern. Throws PatternLargerThanRegion.
DensityEstimate patch_frequency_empirical(const Patch& p, const PatchPattern& pattern);

/// Certified enclosure of the pattern frequency for a prime-power preset:
///   sum_{S c empty} (-1)^|S| prod_p (1 - c_p(occupied u S) / p^{sd}),
/// where c_p counts the distinct classes of the points modulo p^s Z^d. Primes up
/// to prime_bound are multiplied out; beyond it every factor lies in
/// [1 - |X| / p^{sd}, 1]. Requires prime_bound > 2 rho.
/// Throws PatternTooLarge (more than 9 constrained points), InvalidArgument.
BoundedValue patch_frequency_exact(const CoprimeFamily& f, const PatchPattern& pattern,
                                   std::uint64_t prime_bound);

}  // namespace wmset
