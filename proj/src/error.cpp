#include "gsmooth/error.hpp"

namespace gsmooth {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::DisconnectedSpectrum: return "DisconnectedSpectrum";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::AmbiguousLowFrequency: return "AmbiguousLowFrequency";
    case ErrorCode::NonSymmetricFilter: return "NonSymmetricFilter";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::ChannelMismatch: return "ChannelMismatch";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace gsmooth
