#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fcdist {

enum class ErrorCode {
  InvalidArgument,
  EmptyRequest,
  InsufficientLibrary,
  InsufficientSamples,
  BandOutOfRange,
  UnknownMontage,
  ShapeMismatch,
  TooFewSegments,
  ZeroPowerChannel,
  EmptyBand,
  TooShort,
  DegenerateEnvelope,
  NotSymmetric,
  DegenerateDistribution,
  RangeViolation,
  ConstantSeries,
  TooFewPoints,
  ExperimentFailed,
  NoData,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the experiment grid) can map it to an exit status or a
/// per-cell failure record without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace fcdist
