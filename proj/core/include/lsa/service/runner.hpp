#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/backends/chat.hpp"
#include "lsa/clock.hpp"
#include "lsa/dialog/protocol.hpp"
#include "lsa/store/session_store.hpp"

namespace lsa::service {

struct SessionOptions {
  WallClock clock = system_wall_clock();
  const dialog::TemplateCatalog* catalog = nullptr;
};

struct SubmitResult {
  bool reask = false;
  std::vector<std::string> warnings;
  /// What the session waits for next (AskUser or Finish).
  dialog::AssistantAction action;
};

/// A session held open for writing. Every transition is persisted as an
/// event before the in-memory state moves, so a crash at any point leaves
/// a log that folds back to a consistent state.
///
/// advance() issues whatever the protocol calls for (model prompts,
/// drafts, the final plan) until the teacher has to answer or the session
/// is done. Model calls happen synchronously through the backend.
class Session {
 public:
  static Session create(store::SessionStore& store, store::SessionMeta meta,
                        backends::ChatBackend& backend, backends::ModelSpec spec,
                        SessionOptions options = {});
  static Session open(store::SessionStore& store, const std::string& session_id,
                      backends::ChatBackend& backend, backends::ModelSpec spec,
                      SessionOptions options = {});

  /// Runs until an AskUser or Finish action is pending and returns it.
  /// Backend errors propagate; the issued prompt stays in the log and the
  /// next advance() retries the call.
  dialog::AssistantAction advance();

  /// Applies one teacher input (Protocol error when none is expected),
  /// then advances.
  SubmitResult submit(std::string_view text);

  /// The pending action without side effects, if the session is waiting
  /// for the teacher or finished.
  std::optional<dialog::AssistantAction> pending() const;

  bool done() const noexcept;
  bool awaiting_user() const;

  const dialog::DialogState& state() const noexcept { return state_; }
  const store::SessionMeta& meta() const noexcept { return meta_; }
  const std::vector<store::TranscriptEvent>& events() const noexcept { return events_; }

 private:
  Session(store::SessionStore::Writer writer, store::SessionMeta meta, dialog::DialogState state,
          std::vector<store::TranscriptEvent> events, backends::ChatBackend& backend,
          backends::ModelSpec spec, SessionOptions options);

  void record(store::EventKind kind, store::PromptTarget target, std::string content,
              std::optional<long long> latency_ms = std::nullopt);
  void call_model();
  const dialog::TemplateCatalog& catalog() const;

  store::SessionStore::Writer writer_;
  store::SessionMeta meta_;
  dialog::DialogState state_;
  std::vector<store::TranscriptEvent> events_;
  backends::ChatBackend* backend_;
  backends::ModelSpec spec_;
  SessionOptions options_;
};

/// What a stored state is waiting on: the AskUser action when the teacher
/// must answer, Finish when done, nullopt while a model call is owed.
std::optional<dialog::AssistantAction> pending_action(
    const dialog::DialogState& state,
    const dialog::TemplateCatalog& catalog = dialog::TemplateCatalog::builtin());

/// Chat history the model sees at this point of the event log.
backends::ChatHistory history_from_events(const std::vector<store::TranscriptEvent>& events);

/// Drives a session to completion with canned inputs. InvalidInput when the
/// inputs run out before the session finishes; unused inputs become
/// warnings.
struct HeadlessResult {
  std::string final_plan;
  std::vector<std::string> warnings;
};
HeadlessResult run_headless(Session& session, const std::vector<std::string>& inputs);

/// Event log without timestamps, one JSON object per line.
std::string export_transcript(const std::vector<store::TranscriptEvent>& events);

/// Model replies, in order; the documents for linguistic analysis.
std::vector<std::string> model_replies(const std::vector<store::TranscriptEvent>& events);
std::optional<double> mean_latency_ms(const std::vector<store::TranscriptEvent>& events);

}  // namespace lsa::service
