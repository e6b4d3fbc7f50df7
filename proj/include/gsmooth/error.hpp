#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsmooth {

enum class ErrorCode {
  AsymmetricInput,
  NegativeWeight,
  NonzeroDiagonal,
  TooSmall,
  IsolatedNode,
  NotSymmetric,
  ConvergenceFailure,
  DimensionMismatch,
  IndexOutOfRange,
  NegativeEigenvalue,
  DisconnectedSpectrum,
  DegenerateDraw,
  InvalidParameter,
  NotConnected,
  AlphaOutOfRange,
  AmbiguousLowFrequency,
  NonSymmetricFilter,
  AssumptionViolated,
  ChannelMismatch,
  ZeroSignal,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace gsmooth
