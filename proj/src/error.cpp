#include "error.hpp"

namespace qrealize {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSquareInputOutput: return "NonSquareInputOutput";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotSkewSymmetric: return "NotSkewSymmetric";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::NoStabilizingSolution: return "NoStabilizingSolution";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NumericalRankAmbiguity: return "NumericalRankAmbiguity";
    case ErrorCode::ImaginaryAxisEigenvalue: return "ImaginaryAxisEigenvalue";
    case ErrorCode::SingularX1: return "SingularX1";
    case ErrorCode::SingularX: return "SingularX";
    case ErrorCode::NonRealResidue: return "NonRealResidue";
    case ErrorCode::NotRealizableWithoutExtraNoise: return "NotRealizableWithoutExtraNoise";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::SingularV2: return "SingularV2";
    case ErrorCode::SingularR2: return "SingularR2";
    case ErrorCode::AllCandidatesRejected: return "AllCandidatesRejected";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace qrealize
