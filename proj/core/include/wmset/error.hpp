#pragma once

#include <stdexcept>
#include <string>

namespace wmset {

enum class Errc {
  SingularBasis,
  DimensionMismatch,
  NotASublattice,
  IndexOutOfRange,
  NotProper,
  NotCoprime,
  GcdLawViolation,
  DivergentIndexSum,
  BadExponent,
  NotInGamma,
  NoTailBound,
  NotEnoughMembers,
  VerificationFailed,
  ShiftNotInGamma,
  NotInSpectrum,
  DenominatorNotSquareFree,
  SupportNotCovered,
  PatternLargerThanRegion,
  PatternTooLarge,
  InvalidPattern,
  InvalidArgument,
  ParseError,
};

const char* to_string(Errc code);

/// Every library failure is reported as an Error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wmset
