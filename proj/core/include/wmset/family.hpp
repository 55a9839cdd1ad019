#pragma once

// Coprime sublattice families and the cut-and-project data derived from them.
//
// A family is an ambient lattice Gamma together with proper sublattices
// Gamma_1, Gamma_2, ... that are pairwise coprime (Gamma_i + Gamma_j = Gamma),
// obey the gcd-law on finite sections, and have a summable sequence of
// reciprocal indices. The point set is Gamma minus the union of the members;
// its window is the product of the non-zero cosets, so the family itself is
// the window and nothing else is stored.
//
// Infinite families are only ever evaluated up to an explicit truncation
// level N (the first N members) together with a certified bound on the tail
// sum T(N) = sum_{n > N} 1 / [Gamma : Gamma_n].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmset/bigint.hpp"
#include "wmset/error.hpp"
#include "wmset/interval.hpp"
#include "wmset/lattice.hpp"

namespace wmset {

enum class PresetTag { VisibleD2, KFree, BFree, PrimePower, Custom };

const char* to_string(PresetTag tag);

/// Unvalidated family description, as read from JSON or the command line.
struct RawFamily {
  std::optional<std::string> preset;  // visible-d2 | kfree | bfree | prime-power
  std::optional<long> k;              // kfree exponent
  std::optional<long> exponent;       // prime-power exponent s (members p^s Z^d)
  std::optional<long> dim;            // prime-power / custom dimension
  std::vector<BigInt> b;              // bfree moduli

  // Custom families: lattices given as lists of basis column vectors.
  std::optional<std::vector<IntVec>> gamma;
  std::vector<std::vector<IntVec>> subs;
  bool prefix_only = false;  // listed subs are the start of an unknown infinite family
};

class CoprimeFamily {
 public:
  /// {p Z^2 : p prime}; the visible points of Z^2.
  static CoprimeFamily visible_d2();
  /// {p^k Z : p prime}; the k-th power-free integers.
  static CoprimeFamily kfree(long k);
  /// {p^s Z^d : p prime}; requires s * d >= 2 for a summable index series.
  static CoprimeFamily prime_power(long exponent, std::size_t dim);
  /// {b_i Z} for pairwise coprime b_i >= 2 (finite, hence periodic).
  static CoprimeFamily bfree(const std::vector<BigInt>& moduli);
  /// Arbitrary finite list of sublattices of gamma.
  static CoprimeFamily custom(CanonicalLattice gamma, std::vector<CanonicalLattice> subs,
                              bool prefix_only = false);

  PresetTag tag() const noexcept { return tag_; }
  std::string describe() const;

  std::size_t dim() const noexcept { return gamma_.dim(); }
  const CanonicalLattice& gamma() const noexcept { return gamma_; }

  /// Number of members; nullopt for the infinite presets.
  std::optional<std::size_t> size() const noexcept;
  bool is_finite() const noexcept { return size().has_value(); }
  /// min(n, size()).
  std::size_t clamp(std::size_t n) const noexcept;

  CanonicalLattice member(std::size_t n) const;
  /// [Gamma : Gamma_n].
  BigInt index(std::size_t n) const;
  /// m if gamma == Z^d and member n == m Z^d, else 0.
  BigInt scalar_modulus(std::size_t n) const;
  /// The prime p of member n for prime-power presets (member = p^s Z^d).
  std::optional<std::uint64_t> member_prime(std::size_t n) const;
  /// s for prime-power presets (visible-d2: 1, kfree: k), else 0.
  long prime_exponent() const noexcept { return exponent_; }

  /// Number of members whose prime is <= bound (prime-power presets) or all
  /// members (finite families).
  std::size_t members_up_to_prime(std::uint64_t bound) const;

  bool has_tail_bound() const noexcept { return !prefix_only_; }
  /// Certified upper bound for sum_{n >= N} 1/index(n) (zero-based N members kept).
  double tail_index_sum(std::size_t n_kept) const;

  bool is_member(std::size_t n, const IntVec& x) const;

  /// Work done by the structural checks at construction.
  std::size_t coprime_pairs_checked() const noexcept { return coprime_pairs_checked_; }
  std::size_t gcd_law_pairs_checked() const noexcept { return gcd_law_pairs_checked_; }

 private:
  CoprimeFamily() = default;

  PresetTag tag_ = PresetTag::Custom;
  CanonicalLattice gamma_ = CanonicalLattice::identity(1);
  long exponent_ = 0;
  std::vector<CanonicalLattice> subs_;  // finite families only
  std::vector<BigInt> indices_;
  bool prefix_only_ = false;
  std::size_t coprime_pairs_checked_ = 0;
  std::size_t gcd_law_pairs_checked_ = 0;

  void check_structure(std::size_t gcd_law_depth);
};

/// Reductions of a point modulo the first N members.
struct StarImage {
  std::vector<CosetLabel> cosets;
};

/// Outcome of family validation.
struct ValidationReport {
  bool ok = false;
  std::optional<Errc> error;
  std::string message;
  std::string tag;
  std::size_t dim = 0;
  std::optional<std::size_t> size;
  std::size_t coprime_pairs_checked = 0;
  std::size_t gcd_law_pairs_checked = 0;
  std::vector<BigInt> leading_indices;
};

/// Builds and validates a family; throws Error (NotProper, NotCoprime,
/// GcdLawViolation, DivergentIndexSum, BadExponent, ...) on failure.
CoprimeFamily validate(const RawFamily& raw);
/// Same checks, reported instead of thrown.
ValidationReport validation_report(const RawFamily& raw);

StarImage star_map(const CoprimeFamily& f, const IntVec& x, std::size_t truncation);

/// Haar measure of the window: prod_n (1 - 1/index_n), enclosed using the first N factors and
/// the tail bound.
BoundedValue window_measure(const CoprimeFamily& f, std::size_t truncation);

/// Density of the point set: window measure / |det Gamma|.
BoundedValue model_density(const CoprimeFamily& f, std::size_t truncation);

/// Exact density of the crystallographic truncation Gamma \ (Gamma_1 u ... u Gamma_N).
Rational truncated_density_exact(const CoprimeFamily& f, std::size_t truncation);

/// c_W(z*) = prod_n f_n(z), with f_n = (i_n - 1)/i_n if z in Gamma_n and (i_n - 2)/i_n otherwise.
BoundedValue covariogram(const CoprimeFamily& f, const IntVec& z, std::size_t truncation);

/// Upper bound for the upper density of the union of all members beyond N.
double tail_density_bound(const CoprimeFamily& f, std::size_t truncation);

}  // namespace wmset
