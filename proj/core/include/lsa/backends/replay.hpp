#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "lsa/backends/chat.hpp"

namespace lsa::backends {

struct FixtureRecord {
  std::string request_hash;
  std::string response_text;
  long long latency_ms = 0;

  friend bool operator==(const FixtureRecord&, const FixtureRecord&) = default;
};

/// One JSON object per line: {"request_hash","response_text","latency_ms"}.
std::string encode_fixture_record(const FixtureRecord& record);
FixtureRecord decode_fixture_record(std::string_view line);

std::vector<FixtureRecord> read_fixture(const std::filesystem::path& path);
void write_fixture(const std::filesystem::path& path, const std::vector<FixtureRecord>& records);

/// Serves recorded turns. The turn for a request is picked by the number
/// of assistant messages already in the history, so replay is stateless
/// and resumable. Strict mode also requires the history hash to match.
class ReplayBackend final : public ChatBackend {
 public:
  explicit ReplayBackend(std::vector<FixtureRecord> records, bool strict = true);
  static ReplayBackend from_file(const std::filesystem::path& path, bool strict = true);

  CompletionResult complete(const ModelSpec& spec, const ChatHistory& history) override;

  std::size_t size() const noexcept { return records_.size(); }

 private:
  std::vector<FixtureRecord> records_;
  bool strict_;
};

/// Returns canned replies in order regardless of the request. Used to
/// author fixtures and in tests.
class ScriptedBackend final : public ChatBackend {
 public:
  struct Reply {
    std::string text;
    long long latency_ms = 0;
  };

  explicit ScriptedBackend(std::vector<Reply> replies);

  CompletionResult complete(const ModelSpec& spec, const ChatHistory& history) override;

  std::size_t served() const;

 private:
  mutable std::mutex mutex_;
  std::vector<Reply> replies_;
  std::size_t next_ = 0;
};

/// Forwards to an inner backend and appends every exchange to a fixture
/// file. The file is created (empty) on construction.
class RecordingBackend final : public ChatBackend {
 public:
  RecordingBackend(ChatBackend& inner, std::filesystem::path fixture_path);

  CompletionResult complete(const ModelSpec& spec, const ChatHistory& history) override;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  ChatBackend& inner_;
  std::filesystem::path path_;
  std::mutex mutex_;
};

/// Sends each history in order through `backend`, recording to `path`.
/// Returns the results in order.
std::vector<CompletionResult> record_session(ChatBackend& backend, const ModelSpec& spec,
                                             const std::vector<ChatHistory>& requests,
                                             const std::filesystem::path& path);

}  // namespace lsa::backends
