#include "fcdist/error.hpp"

namespace fcdist {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyRequest: return "EmptyRequest";
    case ErrorCode::InsufficientLibrary: return "InsufficientLibrary";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::BandOutOfRange: return "BandOutOfRange";
    case ErrorCode::UnknownMontage: return "UnknownMontage";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewSegments: return "TooFewSegments";
    case ErrorCode::ZeroPowerChannel: return "ZeroPowerChannel";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DegenerateEnvelope: return "DegenerateEnvelope";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ExperimentFailed: return "ExperimentFailed";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace fcdist
