#include "tribunal/error.hpp"

namespace tribunal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateTool: return "DuplicateTool";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::MissingFixture: return "MissingFixture";
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnparseableResponse: return "UnparseableResponse";
    case ErrorCode::AgentFailure: return "AgentFailure";
    case ErrorCode::DebateAborted: return "DebateAborted";
    case ErrorCode::UnboundSlot: return "UnboundSlot";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::MissingReport: return "MissingReport";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace tribunal
