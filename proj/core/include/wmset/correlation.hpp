#pragma once

// Autocorrelation coefficients of finite patches: pair counts at integer
// shifts, normalized by region volume, against dens(Gamma) * c_W(z).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wmset/family.hpp"
#include "wmset/interval.hpp"
#include "wmset/pointset.hpp"

namespace wmset {

using Shift = std::vector<std::int64_t>;

struct AutocorrEntry {
  Shift z;
  std::uint64_t pair_count = 0;
  double empirical = 0.0;  // pair_count / volume
  std::optional<BoundedValue> theoretical;
};

struct AutocorrTable {
  std::vector<AutocorrEntry> entries;  // in the order the shifts were given
  Region region;
  double volume = 0.0;
  std::size_t truncation = 0;  // for the theoretical column; 0 if absent
};

/// Counts x in p with x - z in p (both endpoints inside the patch) for each z.
/// Throws ShiftNotInGamma.
AutocorrTable empirical_autocorr(const Patch& p, const std::vector<Shift>& shifts);

/// dens(Gamma) * c_W(z), enclosed. Throws NotInGamma.
BoundedValue theoretical_autocorr(const CoprimeFamily& f, const Shift& z, std::size_t truncation);

/// Exact value of the same product for the first N members (the crystallographic truncation).
Rational theoretical_autocorr_exact(const CoprimeFamily& f, const Shift& z, std::size_t truncation);

/// Pair density of a finite family's point set, counted over one full period
/// with periodic wrap-around. Throws InvalidArgument for infinite families or
/// periods with more than `max_period` points.
Rational periodic_autocorr(const CoprimeFamily& f, const Shift& z,
                           std::uint64_t max_period = 50'000'000);

/// empirical_autocorr plus the theoretical column.
AutocorrTable autocorr_table(const CoprimeFamily& f, const Patch& p, const std::vector<Shift>& shifts,
                             std::size_t truncation);

struct SandwichEntry {
  Shift z;
  double empirical = 0.0;
  double upper = 0.0;  // theoretical upper endpoint
  double slack = 0.0;
  double margin = 0.0;  // upper + slack - empirical
  bool ok = false;
};

struct SandwichReport {
  std::vector<SandwichEntry> entries;
  double worst_margin = 0.0;
  bool ok = false;
};

/// Checks 0 <= empirical(z) <= upper(z) + slack(z), where slack(z) is the
/// fraction of region points x with x - z outside the region times the density
/// upper bound, plus the tail density excess of the truncated patch.
/// At z = 0 there is no boundary term; `density_tolerance` (the maximality
/// tolerance) stands in for the finite-size deviation of the density.
SandwichReport sandwich_check(const CoprimeFamily& f, const AutocorrTable& table,
                              double density_tolerance = 0.0);

}  // namespace wmset
