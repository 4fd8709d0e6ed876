#include "lsa/dialog/protocol.hpp"

#include <cctype>
#include <string>

#include "lsa/error.hpp"

namespace lsa::dialog {

namespace {

std::string_view trim_ascii(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

bool iequals_ascii(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

DialogState enter(DialogState state, Phase phase) {
  state.phase = phase;
  state.prompt_issued = false;
  return state;
}

DialogState enter_first_draft(DialogState state) {
  state.draft_count = 1;
  return enter(std::move(state), Phase::generate_draft());
}

[[noreturn]] void out_of_phase(const DialogState& state, std::string_view what) {
  throw Error(ErrorCode::Protocol,
              std::string(what) + " not accepted in phase " + describe(state.phase));
}

std::string question_key(int index) { return "question." + std::to_string(index); }

std::string interactive_prompt_for(const DialogState& state, const TemplateCatalog& catalog) {
  const auto& t = catalog.get(state.language);
  auto text = render_interactive_prompt(config_from_answers(state), state.language, catalog);
  if (!state.extra_answers.empty()) {
    text += "\n\n" + t.section("extra.answers.header");
    for (std::size_t i = 0; i < state.extra_answers.size(); ++i) {
      text += "\n- ";
      if (i < state.extra_questions.size()) text += state.extra_questions[i] + " ";
      text += state.extra_answers[i];
    }
  }
  return text;
}

bool ends_with(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix;
}

std::string_view strip_list_marker(std::string_view line) {
  line = trim_ascii(line);
  for (std::string_view bullet : {"- ", "* ", "\xE2\x80\xA2 "}) {
    if (line.rfind(bullet, 0) == 0) return trim_ascii(line.substr(bullet.size()));
  }
  std::size_t digits = 0;
  while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
  if (digits > 0 && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) {
    return trim_ascii(line.substr(digits + 1));
  }
  return line;
}

}  // namespace

std::string_view action_name(const AssistantAction& action) {
  switch (action.index()) {
    case 0: return "SendToModel";
    case 1: return "AskUser";
    case 2: return "PresentDraft";
    default: return "Finish";
  }
}

DialogState new_session(std::string session_id, const ScenarioConfig& config, Language language,
                        const TemplateCatalog& catalog) {
  if (!catalog.supports(language)) {
    throw Error(ErrorCode::Configuration,
                "no prompt templates for language '" + std::string(language_code(language)) + "'");
  }
  if (config.language != language) {
    throw Error(ErrorCode::Configuration, "scenario config language does not match session language");
  }
  DialogState state;
  state.session_id = std::move(session_id);
  state.language = language;
  state.phase = Phase::positioning();
  return state;
}

ScenarioConfig config_from_answers(const DialogState& state) {
  auto answer = [&](int index) {
    const auto it = state.answers.find(index);
    return it == state.answers.end() ? std::string() : it->second;
  };
  ScenarioConfig config;
  config.audience = answer(1);
  config.subject_topic = answer(2);
  config.goal = answer(3);
  config.format_wishes = answer(4);
  config.duration = answer(5);
  config.example_templates = answer(6);
  config.language = state.language;
  return config;
}

std::string render_interactive_prompt(const ScenarioConfig& config, Language language,
                                      const TemplateCatalog& catalog) {
  const auto& t = catalog.get(language);
  std::string out;
  out += t.section("role") + "\n\n";
  out += t.section("task") + "\n\n";
  out += t.section("intro") + "\n\n";
  out += t.section("questions.header") + "\n";
  for (int i = 1; i <= kQuestionCount; ++i) {
    const auto key = question_key(i);
    out += std::to_string(i) + ". " + t.section(key + ".label") + ": " + t.section(key + ".lead") +
           " \"" + t.section(key) + "\"";
    if (t.has(key + ".followup")) out += " " + t.section(key + ".followup");
    out += "\n";
  }
  out += "\n" + t.section("steps.header") + "\n";
  for (const char step : {'a', 'b', 'c', 'd', 'e', 'f'}) {
    out += std::string(1, step) + ". " + t.section(std::string("step.") + step) + "\n";
  }
  out += "\n" + t.section("revision.header") + "\n";
  out += "a. " + t.section("revision.a") + "\n";
  out += "b. " + t.section("revision.b");

  const std::string* fields[] = {&config.audience,      &config.subject_topic,
                                 &config.goal,          &config.format_wishes,
                                 &config.duration,      &config.example_templates};
  bool any = false;
  for (const auto* field : fields) any = any || !field->empty();
  if (any) {
    out += "\n\n" + t.section("answers.header");
    for (int i = 0; i < 6; ++i) {
      if (fields[i]->empty()) continue;
      out += "\n" + std::to_string(i + 1) + ". " + t.section(question_key(i + 1) + ".label") +
             ": " + *fields[i];
    }
  }
  return out;
}

std::optional<KeywordSet> expected_keywords(const DialogState& state) {
  switch (state.phase.kind()) {
    case PhaseKind::AwaitAnswer:
      return state.phase.param() == kQuestionCount ? std::optional(KeywordSet::YesNo) : std::nullopt;
    case PhaseKind::DraftReview:
      return KeywordSet::ContinueRegenerate;
    case PhaseKind::ImprovementLoopCheck:
      return KeywordSet::YesNo;
    default:
      return std::nullopt;
  }
}

AssistantAction next_action(const DialogState& state, const TemplateCatalog& catalog) {
  const auto& t = catalog.get(state.language);
  switch (state.phase.kind()) {
    case PhaseKind::Positioning:
    case PhaseKind::AwaitPositioningReply:
      return SendToModel{t.section("positioning")};
    case PhaseKind::AskQuestion:
    case PhaseKind::AwaitAnswer: {
      const int index = state.phase.param();
      return AskUser{t.section(question_key(index)),
                     index == kQuestionCount ? std::optional(KeywordSet::YesNo) : std::nullopt};
    }
    case PhaseKind::ProposeExtraQuestions:
      return SendToModel{
          t.render("extra.propose", {{"interactive_prompt", interactive_prompt_for(state, catalog)}})};
    case PhaseKind::ExtraQuestions: {
      const int remaining = state.phase.param();
      const auto asked = static_cast<int>(state.extra_questions.size()) - remaining;
      if (remaining == 0 || asked < 0) {
        throw Error(ErrorCode::Protocol, "no clarifying question pending");
      }
      return AskUser{state.extra_questions[static_cast<std::size_t>(asked)], std::nullopt};
    }
    case PhaseKind::GenerateDraft:
      if (state.draft_count <= 1) {
        return SendToModel{t.render("draft.generate",
                                    {{"interactive_prompt", interactive_prompt_for(state, catalog)}})};
      }
      return SendToModel{t.render("draft.regenerate")};
    case PhaseKind::DraftReview:
      if (state.draft_pending) return PresentDraft{state.current_draft};
      return AskUser{t.section("ask.draft_review"), KeywordSet::ContinueRegenerate};
    case PhaseKind::AwaitImprovementRequest:
      return AskUser{t.section("ask.improvement"), std::nullopt};
    case PhaseKind::ApplyImprovement:
      return SendToModel{t.render("improve.apply", {{"request", state.pending_request}})};
    case PhaseKind::ImprovementLoopCheck:
      if (state.draft_pending) return PresentDraft{state.current_draft};
      return AskUser{t.section("ask.improvement_check"), KeywordSet::YesNo};
    case PhaseKind::AwaitHumanEdit:
      return AskUser{t.section("ask.human_edit"), std::nullopt};
    case PhaseKind::FinalRevision:
      return SendToModel{t.render("final.revise", {{"edited_plan", state.edited_plan}})};
    case PhaseKind::Done:
      if (state.finish_consumed) {
        throw Error(ErrorCode::ProtocolExhausted, "session already finished");
      }
      return Finish{state.final_plan};
  }
  throw Error(ErrorCode::Protocol, "unknown phase");
}

bool is_issued(const DialogState& state) {
  switch (state.phase.kind()) {
    case PhaseKind::Positioning:
    case PhaseKind::AskQuestion:
      return false;
    case PhaseKind::AwaitPositioningReply:
    case PhaseKind::AwaitAnswer:
      return true;
    case PhaseKind::Done:
      return state.finish_consumed;
    case PhaseKind::DraftReview:
    case PhaseKind::ImprovementLoopCheck:
      return !state.draft_pending && state.prompt_issued;
    default:
      return state.prompt_issued;
  }
}

DialogState issue(const DialogState& state) {
  DialogState next = state;
  switch (state.phase.kind()) {
    case PhaseKind::Positioning:
      return enter(std::move(next), Phase::await_positioning_reply());
    case PhaseKind::AskQuestion:
      return enter(std::move(next), Phase::await_answer(state.phase.param()));
    case PhaseKind::AwaitPositioningReply:
    case PhaseKind::AwaitAnswer:
      return next;
    case PhaseKind::Done:
      if (state.finish_consumed) {
        throw Error(ErrorCode::ProtocolExhausted, "session already finished");
      }
      next.finish_consumed = true;
      return next;
    case PhaseKind::DraftReview:
    case PhaseKind::ImprovementLoopCheck:
      if (next.draft_pending) {
        next.draft_pending = false;
        return next;
      }
      next.prompt_issued = true;
      return next;
    default:
      next.prompt_issued = true;
      return next;
  }
}

bool expects_user_input(const DialogState& state) {
  switch (state.phase.kind()) {
    case PhaseKind::AwaitAnswer:
    case PhaseKind::DraftReview:
    case PhaseKind::AwaitImprovementRequest:
    case PhaseKind::ImprovementLoopCheck:
    case PhaseKind::AwaitHumanEdit:
      return true;
    case PhaseKind::ExtraQuestions:
      return state.phase.param() > 0;
    default:
      return false;
  }
}

bool expects_model_reply(const DialogState& state) {
  switch (state.phase.kind()) {
    case PhaseKind::AwaitPositioningReply:
    case PhaseKind::ProposeExtraQuestions:
    case PhaseKind::GenerateDraft:
    case PhaseKind::ApplyImprovement:
    case PhaseKind::FinalRevision:
      return true;
    default:
      return false;
  }
}

std::optional<Keyword> parse_keyword(std::string_view text, KeywordSet expected) {
  const auto trimmed = trim_ascii(text);
  for (const auto keyword : allowed_keywords(expected)) {
    if (iequals_ascii(trimmed, to_string(keyword))) return keyword;
  }
  return std::nullopt;
}

InputResult apply_user_input(const DialogState& state, std::string_view text) {
  if (state.phase.is(PhaseKind::Done)) out_of_phase(state, "user input");
  if (!expects_user_input(state)) out_of_phase(state, "user input");

  InputResult result{state, false, {}};
  auto reask = [&] {
    result.reask = true;
    return result;
  };

  if (const auto keywords = expected_keywords(state)) {
    const auto keyword = parse_keyword(text, *keywords);
    if (!keyword) return reask();
    switch (state.phase.kind()) {
      case PhaseKind::AwaitAnswer:
        result.state.answers[kQuestionCount] = std::string(to_string(*keyword));
        result.state = *keyword == Keyword::Yes
                           ? enter(std::move(result.state), Phase::propose_extra_questions())
                           : enter_first_draft(std::move(result.state));
        return result;
      case PhaseKind::DraftReview:
        if (*keyword == Keyword::Regenerate) {
          if (state.draft_count - 1 < kMaxRegenerations) {
            result.state.draft_count += 1;
            result.state = enter(std::move(result.state), Phase::generate_draft());
            return result;
          }
          result.warnings.push_back("regeneration limit of " + std::to_string(kMaxRegenerations) +
                                    " reached; continuing with the current draft");
        }
        result.state.draft_pending = false;
        result.state = enter(std::move(result.state), Phase::await_improvement_request());
        return result;
      case PhaseKind::ImprovementLoopCheck:
        if (*keyword == Keyword::Yes) {
          if (state.improvement_rounds < kMaxImprovementRounds) {
            result.state.improvement_rounds += 1;
            result.state.draft_pending = false;
            result.state = enter(std::move(result.state), Phase::await_improvement_request());
            return result;
          }
          result.warnings.push_back("improvement round limit of " +
                                    std::to_string(kMaxImprovementRounds) +
                                    " reached; moving on to the human edit");
        }
        result.state.draft_pending = false;
        result.state = enter(std::move(result.state), Phase::await_human_edit());
        return result;
      default:
        break;
    }
    out_of_phase(state, "keyword input");
  }

  // Free-text phases store the input verbatim; blank input is asked again.
  if (trim_ascii(text).empty()) return reask();
  switch (state.phase.kind()) {
    case PhaseKind::AwaitAnswer: {
      const int index = state.phase.param();
      result.state.answers[index] = std::string(text);
      result.state = enter(std::move(result.state), Phase::ask_question(index + 1));
      return result;
    }
    case PhaseKind::ExtraQuestions: {
      result.state.extra_answers.emplace_back(text);
      const int remaining = state.phase.param() - 1;
      result.state = remaining == 0
                         ? enter_first_draft(std::move(result.state))
                         : enter(std::move(result.state), Phase::extra_questions(remaining));
      return result;
    }
    case PhaseKind::AwaitImprovementRequest:
      result.state.pending_request = std::string(text);
      result.state = enter(std::move(result.state), Phase::apply_improvement());
      return result;
    case PhaseKind::AwaitHumanEdit:
      result.state.edited_plan = std::string(text);
      result.state = enter(std::move(result.state), Phase::final_revision());
      return result;
    default:
      out_of_phase(state, "free-text input");
  }
}

std::vector<std::string> extract_questions(std::string_view reply) {
  std::vector<std::string> questions;
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= reply.size()) {
    auto eol = reply.find('\n', pos);
    if (eol == std::string_view::npos) eol = reply.size();
    const auto line = strip_list_marker(reply.substr(pos, eol - pos));
    if (!line.empty()) lines.emplace_back(line);
    if (eol == reply.size()) break;
    pos = eol + 1;
  }
  for (const auto& line : lines) {
    // ';' and U+037E are the Greek question mark.
    if (ends_with(line, "?") || ends_with(line, ";") || ends_with(line, "\xCD\xBE")) {
      questions.push_back(line);
    }
  }
  if (questions.empty()) questions = lines;
  if (questions.size() > static_cast<std::size_t>(kMaxExtraQuestions)) {
    questions.resize(kMaxExtraQuestions);
  }
  return questions;
}

DialogState apply_model_reply(const DialogState& state, std::string_view text, long long latency_ms) {
  if (latency_ms < 0) throw Error(ErrorCode::InvalidInput, "negative latency");
  if (!expects_model_reply(state)) out_of_phase(state, "model reply");
  if (trim_ascii(text).empty()) {
    throw Error(ErrorCode::Backend, "model returned an empty reply in phase " + describe(state.phase));
  }
  DialogState next = state;
  switch (state.phase.kind()) {
    case PhaseKind::AwaitPositioningReply:
      return enter(std::move(next), Phase::ask_question(1));
    case PhaseKind::ProposeExtraQuestions: {
      next.extra_questions = extract_questions(text);
      const auto count = static_cast<int>(next.extra_questions.size());
      return count == 0 ? enter_first_draft(std::move(next))
                        : enter(std::move(next), Phase::extra_questions(count));
    }
    case PhaseKind::GenerateDraft:
      next.current_draft = std::string(text);
      next.draft_pending = true;
      return enter(std::move(next), Phase::draft_review());
    case PhaseKind::ApplyImprovement:
      next.current_draft = std::string(text);
      next.pending_request.clear();
      next.draft_pending = true;
      return enter(std::move(next), Phase::improvement_loop_check());
    case PhaseKind::FinalRevision:
      next.final_plan = std::string(text);
      return enter(std::move(next), Phase::done());
    default:
      out_of_phase(state, "model reply");
  }
}

}  // namespace lsa::dialog
