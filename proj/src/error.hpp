#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qrealize {

enum class ErrorCode {
  InvalidArgument,
  OddDimension,
  DimensionMismatch,
  NonSquareInputOutput,
  NotHermitian,
  NotSkewSymmetric,
  NotHurwitz,
  NoStabilizingSolution,
  NotPSD,
  RankMismatch,
  NumericalRankAmbiguity,
  ImaginaryAxisEigenvalue,
  SingularX1,
  SingularX,
  NonRealResidue,
  NotRealizableWithoutExtraNoise,
  SingularResolvent,
  SingularV2,
  SingularR2,
  AllCandidatesRejected,
  InvalidParameter,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the core library. `cause()` is set when an error
/// wraps a lower-level one (e.g. NotRealizableWithoutExtraNoise wrapping
/// SingularX).
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, ErrorCode cause, const std::string& message)
      : std::runtime_error(message), code_(code), cause_(cause) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<ErrorCode> cause() const noexcept { return cause_; }

private:
  ErrorCode code_;
  std::optional<ErrorCode> cause_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace qrealize
