#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bratteli {

enum class ErrorCode {
  ShapeMismatch,
  ZeroRowOrColumn,
  EmptyRootLevel,
  DepthExceeded,
  InvalidCuts,
  IndexOutOfRange,
  NoPairableEdges,
  BundlesTooSmall,
  ConsistencyViolation,
  NotNormalized,
  NotPrimitive,
  NotSymmetric,
  ToleranceAmbiguous,
  UnreachableTarget,
  ArgumentOutOfRange,
  WrongDiagram,
  PathSpaceTooLarge,
  Overflow,
  ParseError,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code);

// All domain failures are reported through this type; code() names the
// failing condition, what() carries the details.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace bratteli
