#include "lsa/store/event.hpp"

#include <ctime>
#include <cstdio>

#include <json.hpp>

#include "lsa/clock.hpp"
#include "lsa/error.hpp"

namespace lsa::store {

namespace {

constexpr std::pair<EventKind, std::string_view> kKindNames[] = {
    {EventKind::AssistantPrompt, "assistant_prompt"},
    {EventKind::ModelReply, "model_reply"},
    {EventKind::UserInput, "user_input"},
    {EventKind::Draft, "draft"},
    {EventKind::FinalPlan, "final_plan"},
    {EventKind::Warning, "warning"},
};

std::chrono::system_clock::time_point parse_utc(const std::string& text) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0, millis = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c", &year, &month, &day, &hour,
                  &minute, &second, &millis, &tail) != 8 ||
      tail != 'Z') {
    throw Error(ErrorCode::InvalidInput, "malformed timestamp '" + text + "'");
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  const auto secs = timegm(&tm);
  return std::chrono::system_clock::time_point(std::chrono::seconds(secs)) +
         std::chrono::milliseconds(millis);
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "warning";
}

EventKind parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw Error(ErrorCode::InvalidInput, "unknown event kind '" + std::string(text) + "'");
}

std::string_view to_string(PromptTarget target) {
  switch (target) {
    case PromptTarget::Model: return "model";
    case PromptTarget::User: return "user";
    case PromptTarget::None: break;
  }
  return "";
}

std::string encode_event(const TranscriptEvent& event, bool with_timestamp) {
  nlohmann::ordered_json j;
  j["seq"] = event.seq;
  if (with_timestamp) j["ts"] = format_utc(event.timestamp);
  j["kind"] = to_string(event.kind);
  if (event.target != PromptTarget::None) j["target"] = to_string(event.target);
  j["content"] = event.content;
  if (event.latency_ms) j["latency_ms"] = *event.latency_ms;
  return j.dump();
}

TranscriptEvent decode_event(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    TranscriptEvent event;
    event.seq = j.at("seq").get<std::uint64_t>();
    if (j.contains("ts")) event.timestamp = parse_utc(j.at("ts").get<std::string>());
    event.kind = parse_event_kind(j.at("kind").get<std::string>());
    if (j.contains("target")) {
      const auto target = j.at("target").get<std::string>();
      if (target == "model") {
        event.target = PromptTarget::Model;
      } else if (target == "user") {
        event.target = PromptTarget::User;
      } else {
        throw Error(ErrorCode::InvalidInput, "unknown prompt target '" + target + "'");
      }
    }
    event.content = j.at("content").get<std::string>();
    if (j.contains("latency_ms")) event.latency_ms = j.at("latency_ms").get<long long>();
    return event;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed event: ") + e.what());
  }
}

dialog::DialogState apply_event(const dialog::DialogState& state, const TranscriptEvent& event) {
  switch (event.kind) {
    case EventKind::AssistantPrompt:
    case EventKind::Draft:
    case EventKind::FinalPlan:
      return dialog::issue(state);
    case EventKind::ModelReply:
      return dialog::apply_model_reply(state, event.content, event.latency_ms.value_or(0));
    case EventKind::UserInput:
      return dialog::apply_user_input(state, event.content).state;
    case EventKind::Warning:
      return state;
  }
  return state;
}

dialog::DialogState fold_events(dialog::DialogState initial, std::span<const TranscriptEvent> events) {
  for (const auto& event : events) initial = apply_event(initial, event);
  return initial;
}

std::vector<ChatTurn> model_conversation(std::span<const TranscriptEvent> events) {
  std::vector<ChatTurn> turns;
  for (const auto& event : events) {
    if (event.kind == EventKind::AssistantPrompt && event.target == PromptTarget::Model) {
      turns.push_back({false, event.content});
    } else if (event.kind == EventKind::ModelReply) {
      turns.push_back({true, event.content});
    }
  }
  return turns;
}

}  // namespace lsa::store
