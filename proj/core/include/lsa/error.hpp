#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lsa {

enum class ErrorCode {
  Configuration,
  InvalidInput,
  Protocol,
  ProtocolExhausted,
  Backend,
  Network,
  Auth,
  RateLimited,
  ReplayExhausted,
  ReplayMismatch,
  Integrity,
  Checksum,
  NotFound,
  Conflict,
  Range,
  Locked,
  Io,
  EmptyCorpus,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is the
/// stable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  /// Retrying the same request may succeed (rate limits, transient network).
  bool retriable() const noexcept;

 private:
  ErrorCode code_;
};

/// Raised when a persisted file fails verification; carries the byte offset
/// of the first bad record.
class ChecksumError : public Error {
 public:
  ChecksumError(const std::string& path, std::uint64_t offset, const std::string& detail);

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace lsa
