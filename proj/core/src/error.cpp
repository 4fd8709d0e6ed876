#include "lsa/error.hpp"

namespace lsa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::Protocol: return "protocol";
    case ErrorCode::ProtocolExhausted: return "protocol_exhausted";
    case ErrorCode::Backend: return "backend";
    case ErrorCode::Network: return "network";
    case ErrorCode::Auth: return "auth";
    case ErrorCode::RateLimited: return "rate_limited";
    case ErrorCode::ReplayExhausted: return "replay_exhausted";
    case ErrorCode::ReplayMismatch: return "replay_mismatch";
    case ErrorCode::Integrity: return "integrity";
    case ErrorCode::Checksum: return "checksum";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Conflict: return "conflict";
    case ErrorCode::Range: return "range";
    case ErrorCode::Locked: return "locked";
    case ErrorCode::Io: return "io";
    case ErrorCode::EmptyCorpus: return "empty_corpus";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

bool Error::retriable() const noexcept {
  return code_ == ErrorCode::RateLimited || code_ == ErrorCode::Network;
}

ChecksumError::ChecksumError(const std::string& path, std::uint64_t offset,
                             const std::string& detail)
    : Error(ErrorCode::Checksum,
            path + ": corrupt record at byte offset " + std::to_string(offset) + ": " + detail),
      offset_(offset) {}

}  // namespace lsa
