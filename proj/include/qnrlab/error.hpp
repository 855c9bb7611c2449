#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnrlab {

enum class Errc {
  NonSquare,
  NotHermitian,
  NotPSD,
  SingularForNegativePower,
  NotAccretive,
  DimensionMismatch,
  RankTooSmall,
  NoAAdjoint,
  NotABounded,
  DimensionTooSmall,
  InvalidArgument,
  InvalidSpec,
  InvalidMeasure,
  QuadratureNotConverged,
  UnknownPredicate,
  ParseError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPSD: return "NotPSD";
    case Errc::SingularForNegativePower: return "SingularForNegativePower";
    case Errc::NotAccretive: return "NotAccretive";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RankTooSmall: return "RankTooSmall";
    case Errc::NoAAdjoint: return "NoAAdjoint";
    case Errc::NotABounded: return "NotABounded";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::InvalidMeasure: return "InvalidMeasure";
    case Errc::QuadratureNotConverged: return "QuadratureNotConverged";
    case Errc::UnknownPredicate: return "UnknownPredicate";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; the code
/// identifies the violated precondition.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qnrlab
