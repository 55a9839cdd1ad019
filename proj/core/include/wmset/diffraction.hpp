#pragma once

// Pure point diffraction of the point set: the spectrum is the sum of the dual
// lattices of the members, each k has a unique minimal support set F_k, and
//   a(k) = dens(V) * prod_{n in F_k} 1 / (1 - [Gamma : Gamma_n]).

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "wmset/bigint.hpp"
#include "wmset/family.hpp"
#include "wmset/interval.hpp"
#include "wmset/pointset.hpp"

namespace wmset {

/// Point with exact rational coordinates (always reduced, positive denominators).
struct RationalPoint {
  std::vector<Rational> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  /// lcm of the coordinate denominators.
  BigInt denominator() const;
  bool is_zero() const;
  std::string str() const;

  /// Comma-separated integers and fractions, e.g. "1/2,-1/3,0".
  static RationalPoint parse(const std::string& text);

  auto operator<=>(const RationalPoint&) const = default;
};

RationalPoint operator+(const RationalPoint& a, const RationalPoint& b);
RationalPoint operator-(const RationalPoint& a);

/// Sorted zero-based member indices.
using SupportSet = std::vector<std::size_t>;

/// Human-readable F_k labels: primes for the prime-power presets, 1-based
/// member numbers otherwise.
std::vector<std::string> support_labels(const CoprimeFamily& f, const SupportSet& support);

/// Unique minimal F with k in Gamma* + sum_{n in F} Gamma_n*. Throws NotInSpectrum.
SupportSet minimal_support(const CoprimeFamily& f, const RationalPoint& k);

/// Throws NotInSpectrum.
BoundedValue amplitude(const CoprimeFamily& f, const RationalPoint& k, std::size_t truncation);

/// Exact amplitude of a finite family. Throws InvalidArgument for infinite families.
Rational amplitude_exact(const CoprimeFamily& f, const RationalPoint& k);

/// (6/pi^2 * prod_{p | den k} 1/(1 - p^2))^2 for the visible points.
/// Throws DenominatorNotSquareFree, DimensionMismatch.
BoundedValue intensity_visible(const RationalPoint& k);

/// (1/vol) sum_{t in p} exp(-2 pi i k.t). The phase k.t is reduced modulo 1
/// exactly before any trigonometric evaluation; block sums are combined by a
/// fixed-shape tree, so the result does not depend on the thread count.
std::complex<double> empirical_amplitude(const Patch& p, const RationalPoint& k);

/// Independent evaluation of a(k) as the alternating sum over F_k c F c [M]
/// of (-1)^|F| dens(Gamma) / prod_{m in F} index_m, summed exactly by
/// elementary symmetric functions, times the tail interval for members beyond M.
/// Throws SupportNotCovered if F_k is not inside the first M members.
BoundedValue inclusion_exclusion_amplitude(const CoprimeFamily& f, const RationalPoint& k,
                                           std::size_t members);

/// Same sum without the tail, as an exact rational.
Rational inclusion_exclusion_partial(const CoprimeFamily& f, const RationalPoint& k,
                                     std::size_t members);

/// Box in dual space: lo_i <= k_i <= hi_i, or lo_i <= k_i < hi_i without include_upper.
struct DualBox {
  std::vector<Rational> lo, hi;
  bool include_upper = true;

  bool contains(const RationalPoint& k) const;
  DualBox translated(const RationalPoint& v) const;
};

struct SpectralLine {
  RationalPoint k;
  SupportSet support;
  BoundedValue amplitude;
  BoundedValue intensity;
  Rational relative_intensity;  // I(k) / I(0) = prod_{n in F_k} 1 / (index_n - 1)^2
};

struct SpectrumTable {
  std::vector<SpectralLine> lines;
  DualBox region;
  double threshold = 0.0;
};

/// All k in the spectrum inside the box with I(k)/I(0) >= threshold.
std::vector<RationalPoint> spectral_support(const CoprimeFamily& f, const DualBox& region,
                                            double threshold);

/// Lines sorted by relative intensity (descending), then k (lexicographic).
SpectrumTable spectrum_table(const CoprimeFamily& f, const DualBox& region, double threshold,
                             std::size_t truncation);

}  // namespace wmset
