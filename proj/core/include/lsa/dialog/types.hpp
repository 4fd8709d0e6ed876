#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lsa::dialog {

inline constexpr int kQuestionCount = 7;
inline constexpr int kMaxExtraQuestions = 2;
inline constexpr int kMaxRegenerations = 10;
inline constexpr int kMaxImprovementRounds = 10;

enum class Language { English, Greek };

/// ISO 639-1 code: "en" or "el".
std::string_view language_code(Language language);

/// Accepts "en"/"english"/"el"/"greek" in any case; anything else is a
/// configuration error.
Language parse_language(std::string_view text);

enum class PhaseKind {
  Positioning,
  AwaitPositioningReply,
  AskQuestion,
  AwaitAnswer,
  ProposeExtraQuestions,
  ExtraQuestions,
  GenerateDraft,
  DraftReview,
  AwaitImprovementRequest,
  ApplyImprovement,
  ImprovementLoopCheck,
  AwaitHumanEdit,
  FinalRevision,
  Done,
};

std::string_view to_string(PhaseKind kind);
PhaseKind parse_phase_kind(std::string_view name);

/// Position inside the scripted prompt thread. AskQuestion/AwaitAnswer carry
/// the question index (1..7); ExtraQuestions carries how many clarifying
/// questions remain (0..2). Constructors enforce both ranges.
class Phase {
 public:
  constexpr Phase() = default;

  static Phase positioning() { return Phase(PhaseKind::Positioning, 0); }
  static Phase await_positioning_reply() { return Phase(PhaseKind::AwaitPositioningReply, 0); }
  static Phase ask_question(int index);
  static Phase await_answer(int index);
  static Phase propose_extra_questions() { return Phase(PhaseKind::ProposeExtraQuestions, 0); }
  static Phase extra_questions(int remaining);
  static Phase generate_draft() { return Phase(PhaseKind::GenerateDraft, 0); }
  static Phase draft_review() { return Phase(PhaseKind::DraftReview, 0); }
  static Phase await_improvement_request() { return Phase(PhaseKind::AwaitImprovementRequest, 0); }
  static Phase apply_improvement() { return Phase(PhaseKind::ApplyImprovement, 0); }
  static Phase improvement_loop_check() { return Phase(PhaseKind::ImprovementLoopCheck, 0); }
  static Phase await_human_edit() { return Phase(PhaseKind::AwaitHumanEdit, 0); }
  static Phase final_revision() { return Phase(PhaseKind::FinalRevision, 0); }
  static Phase done() { return Phase(PhaseKind::Done, 0); }

  /// Rebuilds a phase from its kind and parameter, validating the range.
  static Phase make(PhaseKind kind, int param);

  constexpr PhaseKind kind() const noexcept { return kind_; }
  /// Question index for AskQuestion/AwaitAnswer, remaining count for
  /// ExtraQuestions, 0 otherwise.
  constexpr int param() const noexcept { return param_; }

  constexpr bool is(PhaseKind kind) const noexcept { return kind_ == kind; }

  friend constexpr bool operator==(const Phase&, const Phase&) = default;

 private:
  constexpr Phase(PhaseKind kind, int param) : kind_(kind), param_(param) {}

  PhaseKind kind_ = PhaseKind::Positioning;
  int param_ = 0;
};

/// "AskQuestion(3)", "DraftReview", ...
std::string describe(Phase phase);

enum class Keyword { Continue, Regenerate, Yes, No };

std::string_view to_string(Keyword keyword);

enum class KeywordSet { ContinueRegenerate, YesNo };

std::array<Keyword, 2> allowed_keywords(KeywordSet set);
std::string_view to_string(KeywordSet set);

/// Teacher-supplied answers to questions 1..6 plus the session language.
struct ScenarioConfig {
  std::string audience;
  std::string subject_topic;
  std::string goal;
  std::string format_wishes;
  std::string duration;
  std::string example_templates;
  Language language = Language::English;

  bool complete() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Complete serializable position of one session in the prompt thread.
///
/// Besides the counters it keeps the texts the next prompt needs
/// (current draft, pending improvement request, edited plan) so that
/// next_action stays a pure function of the state.
struct DialogState {
  std::string session_id;
  Phase phase;
  Language language = Language::English;
  std::map<int, std::string> answers;
  std::vector<std::string> extra_questions;
  std::vector<std::string> extra_answers;
  int draft_count = 0;
  int improvement_rounds = 0;
  /// The action for the current phase has been delivered. Only meaningful
  /// for phases that do not have a dedicated Await* kind.
  bool prompt_issued = false;
  /// A fresh draft is waiting to be shown before the next question.
  bool draft_pending = false;
  bool finish_consumed = false;
  std::string current_draft;
  std::string pending_request;
  std::string edited_plan;
  std::string final_plan;

  friend bool operator==(const DialogState&, const DialogState&) = default;
};

}  // namespace lsa::dialog
