#pragma once

// Exact algebra of full-rank sublattices of Z^d.
//
// Lattices are stored as the column-style Hermite normal form of a generating
// matrix: lower triangular, positive diagonal, and every entry left of the
// diagonal reduced into [0, diagonal). Two lattices are equal iff their HNFs
// are equal entry by entry.

#include <cstddef>
#include <span>
#include <vector>

#include "wmset/bigint.hpp"

namespace wmset {

/// Dense row-major matrix of big integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(const std::vector<IntVec>& cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVec column(std::size_t c) const;
  IntMatrix operator*(const IntMatrix& rhs) const;

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// A (possibly non-canonical) square basis; columns generate the lattice.
class LatticeBasis {
 public:
  explicit LatticeBasis(IntMatrix basis);
  static LatticeBasis from_columns(const std::vector<IntVec>& cols);

  std::size_t dim() const noexcept { return basis_.rows(); }
  const IntMatrix& matrix() const noexcept { return basis_; }

 private:
  IntMatrix basis_;
};

class CanonicalLattice {
 public:
  /// Z^d.
  static CanonicalLattice identity(std::size_t dim);
  /// m * Z^d.
  static CanonicalLattice scalar(std::size_t dim, const BigInt& m);

  std::size_t dim() const noexcept { return hnf_.rows(); }
  const IntMatrix& hnf() const noexcept { return hnf_; }
  const BigInt& det_abs() const noexcept { return det_abs_; }
  IntVec column(std::size_t j) const { return hnf_.column(j); }

  /// If the lattice is m * Z^d, returns m; otherwise 0.
  BigInt scalar_factor() const;

  bool operator==(const CanonicalLattice&) const = default;

 private:
  friend CanonicalLattice canonical_from_hnf(IntMatrix h);
  CanonicalLattice() = default;

  IntMatrix hnf_;
  BigInt det_abs_;
};

/// Result of column-style HNF on a d x m matrix A of rank d: A * transform = [h | 0].
struct HnfDecomposition {
  IntMatrix h;          // d x d lower-triangular HNF
  IntMatrix transform;  // m x m unimodular
};

/// Throws SingularBasis if the rows of `a` are linearly dependent.
HnfDecomposition hnf_with_transform(const IntMatrix& a);

/// Wraps a matrix that is already in canonical HNF; validates the shape.
CanonicalLattice canonical_from_hnf(IntMatrix h);

CanonicalLattice canonicalize(const LatticeBasis& b);

bool contains(const CanonicalLattice& lat, const IntVec& x);

/// True iff `sub` is a subset of `super`.
bool is_sublattice(const CanonicalLattice& sub, const CanonicalLattice& super);

/// [outer : inner]; throws NotASublattice unless inner is contained in outer.
BigInt index(const CanonicalLattice& outer, const CanonicalLattice& inner);

CanonicalLattice sum(const CanonicalLattice& a, const CanonicalLattice& b);
CanonicalLattice intersect(const CanonicalLattice& a, const CanonicalLattice& b);

/// Coefficients c with x = hnf * c; throws NotInGamma if x is not in the lattice.
IntVec coordinates(const CanonicalLattice& lat, const IntVec& x);

/// Element of Z^d / lat, represented by the unique reduced vector in the
/// canonical fundamental domain of the triangular basis.
struct CosetLabel {
  CanonicalLattice lattice;
  IntVec rep;

  bool is_zero() const;
  bool operator==(const CosetLabel&) const = default;
};

/// Reduce x into the canonical fundamental domain of `lat`.
IntVec reduce(const CanonicalLattice& lat, IntVec x);
CosetLabel coset_of(const CanonicalLattice& lat, const IntVec& x);
CosetLabel operator+(const CosetLabel& a, const CosetLabel& b);

/// A lattice commensurate with Z^d: the set numerators / denominator, where the
/// denominator is the least positive integer making all points integral.
class RationalLattice {
 public:
  RationalLattice(BigInt denominator, CanonicalLattice numerators);

  std::size_t dim() const noexcept { return numerators_.dim(); }
  const BigInt& denominator() const noexcept { return denominator_; }
  const CanonicalLattice& numerators() const noexcept { return numerators_; }

  /// Basis columns with exact rational entries.
  std::vector<std::vector<Rational>> basis() const;

  bool contains(const std::vector<Rational>& k) const;

  bool operator==(const RationalLattice&) const = default;

 private:
  BigInt denominator_;
  CanonicalLattice numerators_;
};

/// L* = { u : <u, x> integral for all x in L }; basis is the inverse transpose.
RationalLattice dual(const CanonicalLattice& lat);
RationalLattice sum(const RationalLattice& a, const RationalLattice& b);

/// sum(a, b) == gamma, with both a and b inside gamma (NotASublattice otherwise).
bool is_coprime_pair(const CanonicalLattice& gamma, const CanonicalLattice& a,
                     const CanonicalLattice& b);

/// Gamma_F = intersection of subs[n] over n in F; Gamma_{} = gamma.
CanonicalLattice section(const CanonicalLattice& gamma, std::span<const CanonicalLattice> subs,
                         std::span<const std::size_t> members);

/// Gamma_F + Gamma_F' == Gamma_{F cap F'}. Indices are zero-based positions in `subs`.
bool check_gcd_law(const CanonicalLattice& gamma, std::span<const CanonicalLattice> subs,
                   std::span<const std::size_t> f1, std::span<const std::size_t> f2);

}  // namespace wmset
