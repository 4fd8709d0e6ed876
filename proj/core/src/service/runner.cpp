#include "lsa/service/runner.hpp"

#include <fmt/format.h>

#include "lsa/error.hpp"

namespace lsa::service {

using dialog::AskUser;
using dialog::AssistantAction;
using dialog::Finish;
using dialog::PresentDraft;
using dialog::SendToModel;
using store::EventKind;
using store::PromptTarget;

Session::Session(store::SessionStore::Writer writer, store::SessionMeta meta,
                 dialog::DialogState state, std::vector<store::TranscriptEvent> events,
                 backends::ChatBackend& backend, backends::ModelSpec spec, SessionOptions options)
    : writer_(std::move(writer)),
      meta_(std::move(meta)),
      state_(std::move(state)),
      events_(std::move(events)),
      backend_(&backend),
      spec_(std::move(spec)),
      options_(std::move(options)) {}

Session Session::create(store::SessionStore& store, store::SessionMeta meta,
                        backends::ChatBackend& backend, backends::ModelSpec spec,
                        SessionOptions options) {
  if (meta.model_id.empty()) meta.model_id = spec.id;
  meta.temperature = spec.temperature;
  if (meta.created_at.empty()) meta.created_at = format_utc(options.clock());
  const auto& catalog =
      options.catalog != nullptr ? *options.catalog : dialog::TemplateCatalog::builtin();
  // Fails before anything is written when the language has no templates.
  auto state = dialog::new_session(meta.session_id, meta.config, meta.config.language, catalog);
  meta = store.create_session(std::move(meta));
  state.session_id = meta.session_id;
  auto writer = store.open_writer(meta.session_id);
  return Session(std::move(writer), std::move(meta), std::move(state), {}, backend,
                 std::move(spec), std::move(options));
}

Session Session::open(store::SessionStore& store, const std::string& session_id,
                      backends::ChatBackend& backend, backends::ModelSpec spec,
                      SessionOptions options) {
  auto writer = store.open_writer(session_id);
  auto loaded = store.load_session(session_id);
  return Session(std::move(writer), std::move(loaded.meta), std::move(loaded.state),
                 std::move(loaded.events), backend, std::move(spec), std::move(options));
}

const dialog::TemplateCatalog& Session::catalog() const {
  return options_.catalog != nullptr ? *options_.catalog : dialog::TemplateCatalog::builtin();
}

void Session::record(EventKind kind, PromptTarget target, std::string content,
                     std::optional<long long> latency_ms) {
  store::TranscriptEvent event;
  event.seq = writer_.last_seq() + 1;
  event.timestamp = options_.clock();
  event.kind = kind;
  event.target = target;
  event.content = std::move(content);
  event.latency_ms = latency_ms;
  const auto next = store::apply_event(state_, event);
  writer_.append(event);
  event.timestamp = std::chrono::time_point_cast<std::chrono::milliseconds>(event.timestamp);
  events_.push_back(std::move(event));
  state_ = next;
}

void Session::call_model() {
  const auto result = backend_->complete(spec_, history_from_events(events_));
  if (result.truncated) {
    record(EventKind::Warning, PromptTarget::None, "model reply was truncated by the backend");
  }
  record(EventKind::ModelReply, PromptTarget::None, result.text, result.latency_ms);
  writer_.save_state(state_);
}

bool Session::done() const noexcept {
  return state_.phase.is(dialog::PhaseKind::Done) && state_.finish_consumed;
}

bool Session::awaiting_user() const {
  return dialog::is_issued(state_) && dialog::expects_user_input(state_) &&
         !state_.draft_pending;
}

std::optional<AssistantAction> Session::pending() const {
  return pending_action(state_, catalog());
}

std::optional<AssistantAction> pending_action(const dialog::DialogState& state,
                                              const dialog::TemplateCatalog& catalog) {
  if (state.phase.is(dialog::PhaseKind::Done) && state.finish_consumed) {
    return Finish{state.final_plan};
  }
  if (dialog::is_issued(state) && dialog::expects_user_input(state) && !state.draft_pending) {
    return dialog::next_action(state, catalog);
  }
  return std::nullopt;
}

AssistantAction Session::advance() {
  while (true) {
    if (done()) return Finish{state_.final_plan};
    if (dialog::is_issued(state_)) {
      if (dialog::expects_model_reply(state_)) {
        call_model();
        continue;
      }
      if (dialog::expects_user_input(state_)) return dialog::next_action(state_, catalog());
      throw Error(ErrorCode::Protocol,
                  "session stalled in phase " + dialog::describe(state_.phase));
    }
    const auto action = dialog::next_action(state_, catalog());
    if (const auto* send = std::get_if<SendToModel>(&action)) {
      record(EventKind::AssistantPrompt, PromptTarget::Model, send->prompt);
    } else if (const auto* ask = std::get_if<AskUser>(&action)) {
      record(EventKind::AssistantPrompt, PromptTarget::User, ask->question);
    } else if (const auto* draft = std::get_if<PresentDraft>(&action)) {
      record(EventKind::Draft, PromptTarget::None, draft->text);
    } else {
      record(EventKind::FinalPlan, PromptTarget::None, std::get<Finish>(action).final_plan);
    }
    writer_.save_state(state_);
    if (std::holds_alternative<AskUser>(action)) return action;
  }
}

SubmitResult Session::submit(std::string_view text) {
  if (!awaiting_user()) {
    throw Error(ErrorCode::Protocol, "no teacher input expected in phase " +
                                         dialog::describe(state_.phase));
  }
  auto outcome = dialog::apply_user_input(state_, text);
  record(EventKind::UserInput, PromptTarget::None, std::string(text));
  SubmitResult result;
  result.reask = outcome.reask;
  if (outcome.reask) {
    const auto keywords = dialog::expected_keywords(state_);
    const auto warning = keywords ? fmt::format("input not recognised; expected {}",
                                                dialog::to_string(*keywords))
                                  : std::string("empty input; please answer the question");
    record(EventKind::Warning, PromptTarget::None, warning);
    result.warnings.push_back(warning);
  }
  for (const auto& w : outcome.warnings) {
    record(EventKind::Warning, PromptTarget::None, w);
    result.warnings.push_back(w);
  }
  writer_.save_state(state_);
  result.action = advance();
  return result;
}

backends::ChatHistory history_from_events(const std::vector<store::TranscriptEvent>& events) {
  backends::ChatHistory history;
  for (auto& turn : store::model_conversation(events)) {
    history.push_back({turn.from_model ? backends::Role::Assistant : backends::Role::User,
                       std::move(turn.content)});
  }
  return history;
}

HeadlessResult run_headless(Session& session, const std::vector<std::string>& inputs) {
  HeadlessResult result;
  std::size_t next = 0;
  auto action = session.advance();
  while (!session.done()) {
    if (next >= inputs.size()) {
      throw Error(ErrorCode::InvalidInput,
                  fmt::format("scenario inputs ran out in phase {} after {} input(s)",
                              dialog::describe(session.state().phase), inputs.size()));
    }
    auto step = session.submit(inputs[next++]);
    for (auto& w : step.warnings) result.warnings.push_back(std::move(w));
    action = std::move(step.action);
  }
  if (next < inputs.size()) {
    result.warnings.push_back(fmt::format("{} scenario input(s) left unused", inputs.size() - next));
  }
  result.final_plan = std::get<Finish>(action).final_plan;
  return result;
}

std::string export_transcript(const std::vector<store::TranscriptEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += store::encode_event(e, false);
    out += '\n';
  }
  return out;
}

std::vector<std::string> model_replies(const std::vector<store::TranscriptEvent>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::ModelReply) out.push_back(e.content);
  }
  return out;
}

std::optional<double> mean_latency_ms(const std::vector<store::TranscriptEvent>& events) {
  double sum = 0;
  int n = 0;
  for (const auto& e : events) {
    if (e.kind == EventKind::ModelReply && e.latency_ms) {
      sum += static_cast<double>(*e.latency_ms);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace lsa::service
