#include "core/error.hpp"

#include <fmt/format.h>

namespace captem {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInputParse: return "InputParseError";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kMalformedBackendReply: return "MalformedBackendReply";
    case ErrorCode::kOutOfRangeScore: return "OutOfRangeScore";
    case ErrorCode::kAuth: return "AuthError";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kServer: return "ServerError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kClientRequest: return "ClientRequestError";
    case ErrorCode::kMalformedReply: return "MalformedReply";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyTrack: return "EmptyTrack";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "Unknown";
}

InputParseError::InputParseError(const std::string& path, std::size_t line,
                                 const std::string& what)
    : Error(ErrorCode::kInputParse, fmt::format("{}:{}: {}", path, line, what)),
      line_(line) {}

}  // namespace captem
