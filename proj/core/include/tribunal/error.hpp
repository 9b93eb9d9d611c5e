#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tribunal {

enum class ErrorCode {
  DuplicateTool,
  EmptySet,
  BackendUnavailable,
  MissingFixture,
  UnreadableFile,
  LengthMismatch,
  DomainError,
  UnparseableResponse,
  AgentFailure,
  DebateAborted,
  UnboundSlot,
  PreconditionViolation,
  ZeroVector,
  DimMismatch,
  InvariantViolation,
  MissingReport,
  DecodeError,
  EmptyPool,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this one exception type; callers
// branch on code() rather than on a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tribunal
