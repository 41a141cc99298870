#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fovea {

enum class ErrorCode {
  InvalidSpec,
  InfeasibleGrid,
  OutOfBounds,
  DegenerateFit,
  DimensionMismatch,
  DecodeError,
  UnsupportedFormat,
  IoFailure,
  DegenerateBox,
  SpaceMismatch,
  MalformedJson,
  MissingField,
  EmptyAfterFilter,
  UnknownEntry,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code identifies the failure kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fovea
