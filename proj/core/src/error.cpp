#include "fovea/error.hpp"

namespace fovea {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InfeasibleGrid: return "InfeasibleGrid";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::DegenerateBox: return "DegenerateBox";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace fovea
