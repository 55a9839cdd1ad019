#include "wmset/lattice.hpp"

#include <algorithm>
#include <utility>

#include "wmset/error.hpp"

namespace wmset {

namespace {

// s*a + t*b = g = gcd(a, b) >= 0
void extended_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& s, BigInt& t) {
  BigInt old_r = a, r = b;
  BigInt old_s = 1, cur_s = 0;
  BigInt old_t = 0, cur_t = 1;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * cur_s;
    old_s = std::move(cur_s);
    cur_s = std::move(tmp);
    tmp = old_t - q * cur_t;
    old_t = std::move(cur_t);
    cur_t = std::move(tmp);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  s = old_s;
  t = old_t;
}

void swap_columns(IntMatrix& m, std::size_t i, std::size_t j) {
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
}

// col_i <- col_i + f * col_j
void add_column_multiple(IntMatrix& m, std::size_t i, std::size_t j, const BigInt& f) {
  if (f == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, i) += f * m(r, j);
}

void negate_column(IntMatrix& m, std::size_t i) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, i) = -m(r, i);
}

// (col_i, col_j) <- (s col_i + t col_j, u col_i + v col_j)
void combine_columns(IntMatrix& m, std::size_t i, std::size_t j, const BigInt& s, const BigInt& t,
                     const BigInt& u, const BigInt& v) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    BigInt a = m(r, i);
    BigInt b = m(r, j);
    m(r, i) = s * a + t * b;
    m(r, j) = u * a + v * b;
  }
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(Errc::DimensionMismatch,
                "dimensions " + std::to_string(a) + " and " + std::to_string(b));
  }
}

CanonicalLattice hnf_of_columns(const IntMatrix& m) {
  return canonical_from_hnf(hnf_with_transform(m).h);
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

RationalLattice normalized(BigInt denominator, const CanonicalLattice& numerators) {
  const IntMatrix& h = numerators.hnf();
  BigInt g = denominator;
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c <= r; ++c) g = gcd(g, h(r, c));
  if (g <= 1) return RationalLattice(std::move(denominator), numerators);
  IntMatrix scaled = h;
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c <= r; ++c) scaled(r, c) /= g;
  return RationalLattice(denominator / g, canonical_from_hnf(std::move(scaled)));
}

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVec>& cols) {
  if (cols.empty()) throw Error(Errc::InvalidArgument, "matrix needs at least one column");
  IntMatrix m(cols.front().size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    require_same_dim(cols[c].size(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = cols[c][r];
  }
  return m;
}

IntVec IntMatrix::column(std::size_t c) const {
  IntVec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  require_same_dim(cols_, rhs.rows_);
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const BigInt& a = (*this)(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

LatticeBasis::LatticeBasis(IntMatrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() == 0) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
  if (basis_.rows() != basis_.cols()) {
    throw Error(Errc::DimensionMismatch, "basis must be square, got " +
                                             std::to_string(basis_.rows()) + "x" +
                                             std::to_string(basis_.cols()));
  }
}

LatticeBasis LatticeBasis::from_columns(const std::vector<IntVec>& cols) {
  return LatticeBasis(IntMatrix::from_columns(cols));
}

CanonicalLattice CanonicalLattice::identity(std::size_t dim) {
  return canonical_from_hnf(IntMatrix::identity(dim));
}

CanonicalLattice CanonicalLattice::scalar(std::size_t dim, const BigInt& m) {
  if (m <= 0) throw Error(Errc::SingularBasis, "scalar lattice factor must be positive");
  IntMatrix h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = m;
  return canonical_from_hnf(std::move(h));
}

BigInt CanonicalLattice::scalar_factor() const {
  const BigInt& m = hnf_(0, 0);
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t c = 0; c <= r; ++c)
      if (hnf_(r, c) != (r == c ? m : BigInt(0))) return 0;
  return m;
}

HnfDecomposition hnf_with_transform(const IntMatrix& a) {
  const std::size_t d = a.rows();
  const std::size_t m = a.cols();
  if (m < d) throw Error(Errc::SingularBasis, "fewer generators than the dimension");
  IntMatrix h = a;
  IntMatrix u = IntMatrix::identity(m);

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (h(i, j) == 0) continue;
      if (h(i, i) == 0) {
        swap_columns(h, i, j);
        swap_columns(u, i, j);
        continue;
      }
      BigInt g, s, t;
      extended_gcd(h(i, i), h(i, j), g, s, t);
      BigInt p = -h(i, j) / g;
      BigInt q = h(i, i) / g;
      combine_columns(h, i, j, s, t, p, q);
      combine_columns(u, i, j, s, t, p, q);
    }
    if (h(i, i) == 0) throw Error(Errc::SingularBasis, "generators do not span full rank");
    if (h(i, i) < 0) {
      negate_column(h, i);
      negate_column(u, i);
    }
    for (std::size_t j = 0; j < i; ++j) {
      BigInt f = -floor_div(h(i, j), h(i, i));
      add_column_multiple(h, j, i, f);
      add_column_multiple(u, j, i, f);
    }
  }

  IntMatrix square(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) square(r, c) = h(r, c);
  return {std::move(square), std::move(u)};
}

CanonicalLattice canonical_from_hnf(IntMatrix h) {
  const std::size_t d = h.rows();
  if (d == 0 || h.cols() != d) throw Error(Errc::InvalidArgument, "HNF must be square, d >= 1");
  BigInt det = 1;
  for (std::size_t r = 0; r < d; ++r) {
    if (h(r, r) <= 0) throw Error(Errc::InvalidArgument, "HNF diagonal must be positive");
    for (std::size_t c = r + 1; c < d; ++c)
      if (h(r, c) != 0) throw Error(Errc::InvalidArgument, "HNF must be lower triangular");
    for (std::size_t c = 0; c < r; ++c)
      if (h(r, c) < 0 || h(r, c) >= h(r, r))
        throw Error(Errc::InvalidArgument, "HNF off-diagonal entries must be reduced");
    det *= h(r, r);
  }
  CanonicalLattice lat;
  lat.hnf_ = std::move(h);
  lat.det_abs_ = std::move(det);
  return lat;
}

CanonicalLattice canonicalize(const LatticeBasis& b) { return hnf_of_columns(b.matrix()); }

bool contains(const CanonicalLattice& lat, const IntVec& x) {
  require_same_dim(lat.dim(), x.size());
  const IntMatrix& h = lat.hnf();
  IntVec rest = x;
  for (std::size_t i = 0; i < lat.dim(); ++i) {
    if (rest[i] % h(i, i) != 0) return false;
    BigInt c = rest[i] / h(i, i);
    if (c == 0) continue;
    for (std::size_t r = i; r < lat.dim(); ++r) rest[r] -= c * h(r, i);
  }
  return true;
}

IntVec coordinates(const CanonicalLattice& lat, const IntVec& x) {
  require_same_dim(lat.dim(), x.size());
  const IntMatrix& h = lat.hnf();
  IntVec rest = x;
  IntVec coeff(lat.dim());
  for (std::size_t i = 0; i < lat.dim(); ++i) {
    if (rest[i] % h(i, i) != 0) throw Error(Errc::NotInGamma, "point is not in the lattice");
    coeff[i] = rest[i] / h(i, i);
    for (std::size_t r = i; r < lat.dim(); ++r) rest[r] -= coeff[i] * h(r, i);
  }
  return coeff;
}

bool is_sublattice(const CanonicalLattice& sub, const CanonicalLattice& super) {
  require_same_dim(sub.dim(), super.dim());
  if (sub.det_abs() % super.det_abs() != 0) return false;
  for (std::size_t j = 0; j < sub.dim(); ++j)
    if (!contains(super, sub.column(j))) return false;
  return true;
}

BigInt index(const CanonicalLattice& outer, const CanonicalLattice& inner) {
  if (!is_sublattice(inner, outer))
    throw Error(Errc::NotASublattice, "index requires the inner lattice to be contained");
  return inner.det_abs() / outer.det_abs();
}

CanonicalLattice sum(const CanonicalLattice& a, const CanonicalLattice& b) {
  require_same_dim(a.dim(), b.dim());
  return hnf_of_columns(hstack(a.hnf(), b.hnf()));
}

CanonicalLattice intersect(const CanonicalLattice& a, const CanonicalLattice& b) {
  require_same_dim(a.dim(), b.dim());
  const std::size_t d = a.dim();
  // x = A p = B q  <=>  [A | -B] (p; q) = 0; the kernel is spanned by the
  // trailing d columns of the unimodular transform.
  IntMatrix neg_b = b.hnf();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) neg_b(r, c) = -neg_b(r, c);
  HnfDecomposition dec = hnf_with_transform(hstack(a.hnf(), neg_b));

  IntMatrix kernel_top(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) kernel_top(r, c) = dec.transform(r, d + c);
  return hnf_of_columns(a.hnf() * kernel_top);
}

bool CosetLabel::is_zero() const {
  return std::all_of(rep.begin(), rep.end(), [](const BigInt& v) { return v == 0; });
}

IntVec reduce(const CanonicalLattice& lat, IntVec x) {
  require_same_dim(lat.dim(), x.size());
  const IntMatrix& h = lat.hnf();
  for (std::size_t i = 0; i < lat.dim(); ++i) {
    BigInt q = floor_div(x[i], h(i, i));
    if (q == 0) continue;
    for (std::size_t r = i; r < lat.dim(); ++r) x[r] -= q * h(r, i);
  }
  return x;
}

CosetLabel coset_of(const CanonicalLattice& lat, const IntVec& x) {
  return CosetLabel{lat, reduce(lat, x)};
}

CosetLabel operator+(const CosetLabel& a, const CosetLabel& b) {
  if (!(a.lattice == b.lattice))
    throw Error(Errc::InvalidArgument, "cosets of different lattices cannot be added");
  IntVec s = a.rep;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.rep[i];
  return coset_of(a.lattice, std::move(s));
}

RationalLattice::RationalLattice(BigInt denominator, CanonicalLattice numerators)
    : denominator_(std::move(denominator)), numerators_(std::move(numerators)) {
  if (denominator_ <= 0) throw Error(Errc::InvalidArgument, "denominator must be positive");
}

std::vector<std::vector<Rational>> RationalLattice::basis() const {
  std::vector<std::vector<Rational>> cols(dim(), std::vector<Rational>(dim()));
  for (std::size_t c = 0; c < dim(); ++c)
    for (std::size_t r = 0; r < dim(); ++r)
      cols[c][r] = Rational(numerators_.hnf()(r, c), denominator_);
  return cols;
}

bool RationalLattice::contains(const std::vector<Rational>& k) const {
  require_same_dim(dim(), k.size());
  IntVec y(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    Rational scaled = k[i] * denominator_;
    if (boost::multiprecision::denominator(scaled) != 1) return false;
    y[i] = boost::multiprecision::numerator(scaled);
  }
  return wmset::contains(numerators_, y);
}

RationalLattice dual(const CanonicalLattice& lat) {
  const std::size_t d = lat.dim();
  const IntMatrix& h = lat.hnf();
  // Inverse of the lower-triangular H by forward substitution, column by column.
  std::vector<std::vector<Rational>> inv(d, std::vector<Rational>(d));
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = c; r < d; ++r) {
      Rational acc = (r == c) ? Rational(1) : Rational(0);
      for (std::size_t k = c; k < r; ++k) acc -= Rational(h(r, k)) * inv[k][c];
      inv[r][c] = acc / Rational(h(r, r));
    }
  }
  // Dual basis = inv^T; scale by det to make it integral.
  IntMatrix scaled(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      Rational v = inv[c][r] * Rational(lat.det_abs());
      scaled(r, c) = boost::multiprecision::numerator(v);
    }
  return normalized(lat.det_abs(), hnf_of_columns(scaled));
}

RationalLattice sum(const RationalLattice& a, const RationalLattice& b) {
  require_same_dim(a.dim(), b.dim());
  BigInt den = lcm(a.denominator(), b.denominator());
  IntMatrix ma = a.numerators().hnf();
  IntMatrix mb = b.numerators().hnf();
  BigInt fa = den / a.denominator();
  BigInt fb = den / b.denominator();
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) {
      ma(r, c) *= fa;
      mb(r, c) *= fb;
    }
  return normalized(den, hnf_of_columns(hstack(ma, mb)));
}

bool is_coprime_pair(const CanonicalLattice& gamma, const CanonicalLattice& a,
                     const CanonicalLattice& b) {
  if (!is_sublattice(a, gamma) || !is_sublattice(b, gamma))
    throw Error(Errc::NotASublattice, "coprimality is defined for sublattices of gamma");
  return sum(a, b) == gamma;
}

CanonicalLattice section(const CanonicalLattice& gamma, std::span<const CanonicalLattice> subs,
                         std::span<const std::size_t> members) {
  CanonicalLattice out = gamma;
  for (std::size_t n : members) {
    if (n >= subs.size())
      throw Error(Errc::IndexOutOfRange, "member " + std::to_string(n + 1) + " of " +
                                             std::to_string(subs.size()));
    out = intersect(out, subs[n]);
  }
  return out;
}

bool check_gcd_law(const CanonicalLattice& gamma, std::span<const CanonicalLattice> subs,
                   std::span<const std::size_t> f1, std::span<const std::size_t> f2) {
  std::vector<std::size_t> a(f1.begin(), f1.end());
  std::vector<std::size_t> b(f2.begin(), f2.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::size_t> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return sum(section(gamma, subs, a), section(gamma, subs, b)) == section(gamma, subs, common);
}

}  // namespace wmset
