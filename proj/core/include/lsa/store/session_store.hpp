#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lsa/dialog/protocol.hpp"
#include "lsa/store/event.hpp"

namespace lsa::store {

/// Contents of config.json: the scenario skeleton plus the run metadata
/// needed to resume a session.
struct SessionMeta {
  std::string session_id;
  std::string scenario_id;
  std::string model_id;
  dialog::ScenarioConfig config;
  double temperature = 0.7;
  std::string created_at;

  friend bool operator==(const SessionMeta&, const SessionMeta&) = default;
};

struct LoadedSession {
  SessionMeta meta;
  dialog::DialogState state;
  std::vector<TranscriptEvent> events;
  /// Config with answers 1..6 folded in.
  dialog::ScenarioConfig config;
};

/// 32 lowercase hex characters from a 128-bit random value.
std::string new_session_id();

/// One directory per session:
///   <root>/<id>/config.json    SessionMeta
///   <root>/<id>/events.ndjson  {"crc":"<crc32 hex>","event":{...}} per line
///   <root>/<id>/state.json     cached DialogState and last seq (derivable)
///   <root>/<id>/.lock          writer lock
class SessionStore {
 public:
  /// Exclusive append handle for one session. Holds the lock file for its
  /// lifetime; a second writer on the same session gets a Locked error.
  class Writer {
   public:
    Writer(Writer&&) noexcept;
    Writer& operator=(Writer&&) noexcept;
    ~Writer();

    /// Requires event.seq == last_seq() + 1. Durable on return.
    std::uint64_t append(const TranscriptEvent& event);
    void save_state(const dialog::DialogState& state);
    std::uint64_t last_seq() const noexcept;
    const std::string& session_id() const noexcept;

   private:
    friend class SessionStore;
    struct Impl;
    explicit Writer(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
  };

  explicit SessionStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Creates the session directory. An empty session_id gets a fresh
  /// random one. Conflict if the id already exists.
  SessionMeta create_session(SessionMeta meta);

  bool exists(const std::string& session_id) const;
  std::vector<std::string> list_sessions() const;

  Writer open_writer(const std::string& session_id);

  /// Convenience: opens a writer, appends, releases.
  std::uint64_t append_event(const std::string& session_id, const TranscriptEvent& event);

  SessionMeta read_meta(const std::string& session_id) const;
  /// Verifies every line checksum; ChecksumError with the byte offset of
  /// the first bad line.
  std::vector<TranscriptEvent> read_events(const std::string& session_id) const;
  /// Rebuilds the state by folding the events over new_session.
  LoadedSession load_session(const std::string& session_id) const;

  std::filesystem::path session_dir(const std::string& session_id) const;

 private:
  std::filesystem::path root_;
};

}  // namespace lsa::store
