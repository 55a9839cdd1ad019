#include "wmset/family.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "wmset/primes.hpp"

namespace wmset {

namespace {

constexpr std::size_t kGcdLawDepth = 6;
constexpr std::size_t kMaxSectionSize = 3;

std::string member_list(std::uint32_t mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < 32; ++i) {
    if (!(mask & (1u << i))) continue;
    if (!first) os << ',';
    os << i + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

BigInt ipow(const BigInt& base, long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= base;
  return r;
}

bool all_divisible(const IntVec& x, const BigInt& m) {
  return std::all_of(x.begin(), x.end(), [&](const BigInt& v) { return v % m == 0; });
}

}  // namespace

const char* to_string(PresetTag tag) {
  switch (tag) {
    case PresetTag::VisibleD2: return "visible-d2";
    case PresetTag::KFree: return "kfree";
    case PresetTag::BFree: return "bfree";
    case PresetTag::PrimePower: return "prime-power";
    case PresetTag::Custom: return "custom";
  }
  return "custom";
}

CoprimeFamily CoprimeFamily::visible_d2() {
  CoprimeFamily f = prime_power(1, 2);
  f.tag_ = PresetTag::VisibleD2;
  return f;
}

CoprimeFamily CoprimeFamily::kfree(long k) {
  if (k < 2) throw Error(Errc::BadExponent, "k-free integers need k >= 2, got " + std::to_string(k));
  CoprimeFamily f = prime_power(k, 1);
  f.tag_ = PresetTag::KFree;
  return f;
}

CoprimeFamily CoprimeFamily::prime_power(long exponent, std::size_t dim) {
  if (exponent < 1) throw Error(Errc::BadExponent, "prime-power exponent must be >= 1");
  if (dim < 1) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
  if (exponent * static_cast<long>(dim) < 2) {
    throw Error(Errc::DivergentIndexSum,
                "sum of 1/p^(s*d) diverges for s*d = " + std::to_string(exponent * dim));
  }
  CoprimeFamily f;
  f.tag_ = PresetTag::PrimePower;
  f.gamma_ = CanonicalLattice::identity(dim);
  f.exponent_ = exponent;
  f.check_structure(kGcdLawDepth);
  return f;
}

CoprimeFamily CoprimeFamily::bfree(const std::vector<BigInt>& moduli) {
  if (moduli.empty()) throw Error(Errc::InvalidArgument, "bfree needs at least one modulus");
  std::vector<CanonicalLattice> subs;
  subs.reserve(moduli.size());
  for (const BigInt& b : moduli) {
    if (b < 2) throw Error(Errc::NotProper, "bfree modulus " + b.str() + " gives index < 2");
    subs.push_back(CanonicalLattice::scalar(1, b));
  }
  CoprimeFamily f = custom(CanonicalLattice::identity(1), std::move(subs));
  f.tag_ = PresetTag::BFree;
  return f;
}

CoprimeFamily CoprimeFamily::custom(CanonicalLattice gamma, std::vector<CanonicalLattice> subs,
                                    bool prefix_only) {
  if (subs.empty()) throw Error(Errc::InvalidArgument, "a family needs at least one sublattice");
  CoprimeFamily f;
  f.tag_ = PresetTag::Custom;
  f.gamma_ = std::move(gamma);
  f.prefix_only_ = prefix_only;
  for (std::size_t n = 0; n < subs.size(); ++n) {
    if (subs[n].dim() != f.gamma_.dim())
      throw Error(Errc::DimensionMismatch, "member " + std::to_string(n + 1) + " has wrong dimension");
    if (!is_sublattice(subs[n], f.gamma_))
      throw Error(Errc::NotASublattice, "member " + std::to_string(n + 1) + " is not inside gamma");
    f.indices_.push_back(subs[n].det_abs() / f.gamma_.det_abs());
  }
  f.subs_ = std::move(subs);
  f.check_structure(kGcdLawDepth);
  return f;
}

void CoprimeFamily::check_structure(std::size_t gcd_law_depth) {
  const std::size_t pair_limit = is_finite() ? *size() : gcd_law_depth;
  std::vector<CanonicalLattice> head;
  for (std::size_t n = 0; n < pair_limit; ++n) {
    if (index(n) < 2) throw Error(Errc::NotProper, "member " + std::to_string(n + 1) + " equals gamma");
    head.push_back(member(n));
  }

  coprime_pairs_checked_ = 0;
  for (std::size_t i = 0; i < head.size(); ++i)
    for (std::size_t j = i + 1; j < head.size(); ++j) {
      ++coprime_pairs_checked_;
      if (!(sum(head[i], head[j]) == gamma_)) {
        throw Error(Errc::NotCoprime, "members " + std::to_string(i + 1) + " and " +
                                          std::to_string(j + 1) + " are not coprime");
      }
    }

  // gcd-law on all sections of size <= 3 drawn from the leading members.
  const std::size_t depth = std::min(head.size(), gcd_law_depth);
  std::map<std::uint32_t, CanonicalLattice> sections;
  for (std::uint32_t mask = 0; mask < (1u << depth); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > kMaxSectionSize) continue;
    if (mask == 0) {
      sections.emplace(0u, gamma_);
      continue;
    }
    const std::uint32_t low = mask & (~mask + 1);
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(low));
    sections.emplace(mask, intersect(sections.at(mask ^ low), head[bit]));
  }
  gcd_law_pairs_checked_ = 0;
  for (auto a = sections.begin(); a != sections.end(); ++a)
    for (auto b = a; b != sections.end(); ++b) {
      ++gcd_law_pairs_checked_;
      const std::uint32_t common = a->first & b->first;
      if (!(sum(a->second, b->second) == sections.at(common))) {
        throw Error(Errc::GcdLawViolation,
                    "sections " + member_list(a->first) + " and " + member_list(b->first));
      }
    }
}

std::string CoprimeFamily::describe() const {
  std::ostringstream os;
  switch (tag_) {
    case PresetTag::VisibleD2: os << "visible-d2"; break;
    case PresetTag::KFree: os << "kfree(k=" << exponent_ << ")"; break;
    case PresetTag::PrimePower: os << "prime-power(s=" << exponent_ << ",d=" << dim() << ")"; break;
    case PresetTag::BFree:
    case PresetTag::Custom:
      os << to_string(tag_) << "(d=" << dim() << ",members=" << subs_.size()
         << (prefix_only_ ? ",prefix" : "") << ")";
      break;
  }
  return os.str();
}

std::optional<std::size_t> CoprimeFamily::size() const noexcept {
  if (exponent_ > 0) return std::nullopt;
  return subs_.size();
}

std::size_t CoprimeFamily::clamp(std::size_t n) const noexcept {
  auto s = size();
  return s ? std::min(n, *s) : n;
}

CanonicalLattice CoprimeFamily::member(std::size_t n) const {
  if (exponent_ > 0) return CanonicalLattice::scalar(dim(), ipow(BigInt(primes::nth(n)), exponent_));
  if (n >= subs_.size())
    throw Error(Errc::IndexOutOfRange, "member " + std::to_string(n + 1) + " of " +
                                           std::to_string(subs_.size()));
  return subs_[n];
}

BigInt CoprimeFamily::index(std::size_t n) const {
  if (exponent_ > 0) return ipow(BigInt(primes::nth(n)), exponent_ * static_cast<long>(dim()));
  if (n >= indices_.size())
    throw Error(Errc::IndexOutOfRange, "member " + std::to_string(n + 1) + " of " +
                                           std::to_string(indices_.size()));
  return indices_[n];
}

BigInt CoprimeFamily::scalar_modulus(std::size_t n) const {
  if (exponent_ > 0) return ipow(BigInt(primes::nth(n)), exponent_);
  if (gamma_.scalar_factor() != 1) return 0;
  return member(n).scalar_factor();
}

std::optional<std::uint64_t> CoprimeFamily::member_prime(std::size_t n) const {
  if (exponent_ > 0) return primes::nth(n);
  return std::nullopt;
}

std::size_t CoprimeFamily::members_up_to_prime(std::uint64_t bound) const {
  if (exponent_ > 0) return primes::count_up_to(bound);
  return subs_.size();
}

double CoprimeFamily::tail_index_sum(std::size_t n_kept) const {
  if (prefix_only_)
    throw Error(Errc::NoTailBound, "family lists only a prefix of its members; no tail bound");
  if (exponent_ > 0) {
    // sum_{p >= q} p^-e <= sum_{m >= q} m^-e <= integral_{q-1}^inf x^-e dx.
    const long e = exponent_ * static_cast<long>(dim());
    const BigInt q = primes::nth(n_kept);
    return BoundedValue::enclose(Rational(BigInt(1), BigInt(e - 1) * ipow(q - 1, e - 1))).upper();
  }
  Rational rest = 0;
  for (std::size_t n = n_kept; n < indices_.size(); ++n) rest += Rational(BigInt(1), indices_[n]);
  return BoundedValue::enclose(rest).upper();
}

bool CoprimeFamily::is_member(std::size_t n, const IntVec& x) const {
  BigInt m = scalar_modulus(n);
  if (m != 0) return all_divisible(x, m);
  return contains(member(n), x);
}

CoprimeFamily validate(const RawFamily& raw) {
  if (raw.preset) {
    const std::string& p = *raw.preset;
    if (p == "visible-d2") return CoprimeFamily::visible_d2();
    if (p == "kfree") {
      if (!raw.k) throw Error(Errc::InvalidArgument, "kfree preset needs k");
      return CoprimeFamily::kfree(*raw.k);
    }
    if (p == "prime-power") {
      if (!raw.exponent || !raw.dim)
        throw Error(Errc::InvalidArgument, "prime-power preset needs exponent and dim");
      if (*raw.dim < 1) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
      return CoprimeFamily::prime_power(*raw.exponent, static_cast<std::size_t>(*raw.dim));
    }
    if (p == "bfree") return CoprimeFamily::bfree(raw.b);
    throw Error(Errc::InvalidArgument, "unknown preset '" + p + "'");
  }

  if (raw.subs.empty()) throw Error(Errc::InvalidArgument, "family needs a preset or subs");
  const std::size_t d = raw.gamma ? raw.gamma->size()
                                  : static_cast<std::size_t>(raw.dim.value_or(
                                        static_cast<long>(raw.subs.front().size())));
  if (raw.dim && static_cast<std::size_t>(*raw.dim) != d)
    throw Error(Errc::DimensionMismatch, "gamma does not match the declared dimension");
  CanonicalLattice gamma = raw.gamma ? canonicalize(LatticeBasis::from_columns(*raw.gamma))
                                     : CanonicalLattice::identity(d);
  std::vector<CanonicalLattice> subs;
  for (const auto& cols : raw.subs) subs.push_back(canonicalize(LatticeBasis::from_columns(cols)));
  return CoprimeFamily::custom(std::move(gamma), std::move(subs), raw.prefix_only);
}

ValidationReport validation_report(const RawFamily& raw) {
  ValidationReport report;
  try {
    CoprimeFamily f = validate(raw);
    report.ok = true;
    report.tag = f.describe();
    report.dim = f.dim();
    report.size = f.size();
    report.coprime_pairs_checked = f.coprime_pairs_checked();
    report.gcd_law_pairs_checked = f.gcd_law_pairs_checked();
    for (std::size_t n = 0; n < f.clamp(6); ++n) report.leading_indices.push_back(f.index(n));
    report.message = "valid coprime sublattice family";
  } catch (const Error& e) {
    report.ok = false;
    report.error = e.code();
    report.message = e.what();
  }
  return report;
}

StarImage star_map(const CoprimeFamily& f, const IntVec& x, std::size_t truncation) {
  if (!contains(f.gamma(), x)) throw Error(Errc::NotInGamma, "star map is defined on gamma");
  StarImage img;
  const std::size_t n_max = f.clamp(truncation);
  img.cosets.reserve(n_max);
  for (std::size_t n = 0; n < n_max; ++n) img.cosets.push_back(coset_of(f.member(n), x));
  return img;
}

namespace {

void require_truncation(std::size_t truncation) {
  if (truncation < 1) throw Error(Errc::InvalidArgument, "truncation level must be >= 1");
}

// prod_{n < N} factor(n), times the tail interval [max(0, 1 - c*T(N)), 1].
template <class Factor>
BoundedValue truncated_product(const CoprimeFamily& f, std::size_t truncation, double tail_weight,
                               Factor factor) {
  require_truncation(truncation);
  const std::size_t n_max = f.clamp(truncation);
  BoundedValue acc = BoundedValue::point(1.0);
  for (std::size_t n = 0; n < n_max; ++n) acc = acc * factor(n);
  const double tail = f.tail_index_sum(n_max);
  if (tail == 0.0) return acc;
  BoundedValue tail_factor =
      clamp(BoundedValue(1.0, 1.0) - BoundedValue::point(tail_weight) * BoundedValue::point(tail),
            0.0, 1.0);
  return acc * BoundedValue(tail_factor.lower(), 1.0);
}

}  // namespace

BoundedValue window_measure(const CoprimeFamily& f, std::size_t truncation) {
  return truncated_product(f, truncation, 1.0,
                           [&](std::size_t n) { return one_minus_ratio(1, f.index(n)); });
}

BoundedValue model_density(const CoprimeFamily& f, std::size_t truncation) {
  return window_measure(f, truncation) *
         BoundedValue::enclose(Rational(BigInt(1), f.gamma().det_abs()));
}

Rational truncated_density_exact(const CoprimeFamily& f, std::size_t truncation) {
  Rational acc(BigInt(1), f.gamma().det_abs());
  for (std::size_t n = 0; n < f.clamp(truncation); ++n)
    acc *= Rational(1) - Rational(BigInt(1), f.index(n));
  return acc;
}

BoundedValue covariogram(const CoprimeFamily& f, const IntVec& z, std::size_t truncation) {
  if (!contains(f.gamma(), z)) throw Error(Errc::NotInGamma, "covariogram shift must lie in gamma");
  const bool zero = std::all_of(z.begin(), z.end(), [](const BigInt& v) { return v == 0; });
  // Tail factors lie in [1 - 2/i_n, 1]; at z = 0 they are all 1 - 1/i_n.
  return truncated_product(f, truncation, zero ? 1.0 : 2.0, [&](std::size_t n) {
    return one_minus_ratio(f.is_member(n, z) ? 1 : 2, f.index(n));
  });
}

double tail_density_bound(const CoprimeFamily& f, std::size_t truncation) {
  const double tail = f.tail_index_sum(f.clamp(truncation));
  return (BoundedValue::point(tail) *
          BoundedValue::enclose(Rational(BigInt(1), f.gamma().det_abs())))
      .upper();
}

}  // namespace wmset
