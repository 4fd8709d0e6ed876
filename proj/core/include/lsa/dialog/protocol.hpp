#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lsa/dialog/templates.hpp"
#include "lsa/dialog/types.hpp"

namespace lsa::dialog {

struct SendToModel {
  std::string prompt;
  friend bool operator==(const SendToModel&, const SendToModel&) = default;
};

struct AskUser {
  std::string question;
  /// Empty means free text.
  std::optional<KeywordSet> keywords;
  friend bool operator==(const AskUser&, const AskUser&) = default;
};

struct PresentDraft {
  std::string text;
  friend bool operator==(const PresentDraft&, const PresentDraft&) = default;
};

struct Finish {
  std::string final_plan;
  friend bool operator==(const Finish&, const Finish&) = default;
};

using AssistantAction = std::variant<SendToModel, AskUser, PresentDraft, Finish>;

std::string_view action_name(const AssistantAction& action);

struct InputResult {
  DialogState state;
  /// The input did not parse as one of the offered keywords; state is
  /// unchanged and the same question should be asked again.
  bool reask = false;
  /// Forced progressions (loop caps) the caller should log.
  std::vector<std::string> warnings;
};

DialogState new_session(std::string session_id, const ScenarioConfig& config, Language language,
                        const TemplateCatalog& catalog = TemplateCatalog::builtin());

/// The action the current phase calls for. Pure: repeated calls on the same
/// state return the same action, except that Done fails once its Finish has
/// been issued.
AssistantAction next_action(const DialogState& state,
                            const TemplateCatalog& catalog = TemplateCatalog::builtin());

/// Records that next_action's result was delivered. Positioning and
/// AskQuestion(i) move to their Await phases, Done consumes the Finish, a
/// PresentDraft clears the pending draft, everything else only sets
/// prompt_issued. Issuing an already-issued prompt is a no-op.
DialogState issue(const DialogState& state);

/// True when the current phase's prompt has already been delivered.
bool is_issued(const DialogState& state);

/// True when the phase is waiting for the teacher (vs. the model).
bool expects_user_input(const DialogState& state);
bool expects_model_reply(const DialogState& state);

/// Keyword set the current phase parses its input against, if any.
std::optional<KeywordSet> expected_keywords(const DialogState& state);

InputResult apply_user_input(const DialogState& state, std::string_view text);

DialogState apply_model_reply(const DialogState& state, std::string_view text, long long latency_ms);

/// Case-insensitive, whitespace-trimmed exact match. nullopt is NoMatch.
std::optional<Keyword> parse_keyword(std::string_view text, KeywordSet expected);

/// The full interactive prompt with the seven questions and both step
/// lists. Non-empty config fields are appended as already-collected answers.
std::string render_interactive_prompt(const ScenarioConfig& config, Language language,
                                      const TemplateCatalog& catalog = TemplateCatalog::builtin());

/// Answers 1..6 of the state folded into a config.
ScenarioConfig config_from_answers(const DialogState& state);

/// Splits a model reply into at most kMaxExtraQuestions questions.
std::vector<std::string> extract_questions(std::string_view reply);

}  // namespace lsa::dialog
