#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace captem {

// Numeric values are part of the C ABI (see include/captem.h); append only.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kInputParse = 2,
  kMissingReference = 3,
  kEmptyCorpus = 4,
  kBackendUnavailable = 5,
  kMalformedBackendReply = 6,
  kOutOfRangeScore = 7,
  kAuth = 8,
  kRateLimited = 9,
  kServer = 10,
  kTimeout = 11,
  kClientRequest = 12,
  kMalformedReply = 13,
  kIo = 14,
  kDimensionMismatch = 15,
  kEmptyTrack = 16,
  kNoOverlap = 17,
  kConfig = 18,
  kInternal = 19,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// InputParseError carries the 1-based line number of the offending record.
class InputParseError : public Error {
 public:
  InputParseError(const std::string& path, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace captem
