#include "wmset/error.hpp"

namespace wmset {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::SingularBasis: return "SingularBasis";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotASublattice: return "NotASublattice";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NotProper: return "NotProper";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::GcdLawViolation: return "GcdLawViolation";
    case Errc::DivergentIndexSum: return "DivergentIndexSum";
    case Errc::BadExponent: return "BadExponent";
    case Errc::NotInGamma: return "NotInGamma";
    case Errc::NoTailBound: return "NoTailBound";
    case Errc::NotEnoughMembers: return "NotEnoughMembers";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::ShiftNotInGamma: return "ShiftNotInGamma";
    case Errc::NotInSpectrum: return "NotInSpectrum";
    case Errc::DenominatorNotSquareFree: return "DenominatorNotSquareFree";
    case Errc::SupportNotCovered: return "SupportNotCovered";
    case Errc::PatternLargerThanRegion: return "PatternLargerThanRegion";
    case Errc::PatternTooLarge: return "PatternTooLarge";
    case Errc::InvalidPattern: return "InvalidPattern";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace wmset
