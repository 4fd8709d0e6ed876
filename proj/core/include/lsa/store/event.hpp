#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/dialog/protocol.hpp"

namespace lsa::store {

enum class EventKind { AssistantPrompt, ModelReply, UserInput, Draft, FinalPlan, Warning };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

/// Who an AssistantPrompt was addressed to.
enum class PromptTarget { None, Model, User };

std::string_view to_string(PromptTarget target);

struct TranscriptEvent {
  std::uint64_t seq = 0;
  /// Millisecond precision; finer parts are dropped when persisted.
  std::chrono::system_clock::time_point timestamp{};
  EventKind kind = EventKind::Warning;
  PromptTarget target = PromptTarget::None;
  std::string content;
  std::optional<long long> latency_ms;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

/// Single-line JSON with fixed field order: seq, ts, kind, [target],
/// content, [latency_ms]. Without the timestamp when `with_timestamp` is
/// false (used for diffable transcript exports).
std::string encode_event(const TranscriptEvent& event, bool with_timestamp = true);
TranscriptEvent decode_event(std::string_view json);

/// Applies one persisted event to a dialog state. Informational events
/// (warnings) leave it unchanged.
dialog::DialogState apply_event(const dialog::DialogState& state, const TranscriptEvent& event);

/// Left fold of apply_event.
dialog::DialogState fold_events(dialog::DialogState initial, std::span<const TranscriptEvent> events);

/// Model-visible conversation reconstructed from the events: prompts sent
/// to the model become user turns, model replies assistant turns.
struct ChatTurn {
  bool from_model = false;
  std::string content;
};
std::vector<ChatTurn> model_conversation(std::span<const TranscriptEvent> events);

}  // namespace lsa::store
