#include <algorithm>
#include <cctype>
#include <string>

#include "lsa/dialog/types.hpp"
#include "lsa/error.hpp"

namespace lsa::dialog {

namespace {

std::string lower_ascii(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr std::pair<PhaseKind, std::string_view> kPhaseNames[] = {
    {PhaseKind::Positioning, "Positioning"},
    {PhaseKind::AwaitPositioningReply, "AwaitPositioningReply"},
    {PhaseKind::AskQuestion, "AskQuestion"},
    {PhaseKind::AwaitAnswer, "AwaitAnswer"},
    {PhaseKind::ProposeExtraQuestions, "ProposeExtraQuestions"},
    {PhaseKind::ExtraQuestions, "ExtraQuestions"},
    {PhaseKind::GenerateDraft, "GenerateDraft"},
    {PhaseKind::DraftReview, "DraftReview"},
    {PhaseKind::AwaitImprovementRequest, "AwaitImprovementRequest"},
    {PhaseKind::ApplyImprovement, "ApplyImprovement"},
    {PhaseKind::ImprovementLoopCheck, "ImprovementLoopCheck"},
    {PhaseKind::AwaitHumanEdit, "AwaitHumanEdit"},
    {PhaseKind::FinalRevision, "FinalRevision"},
    {PhaseKind::Done, "Done"},
};

}  // namespace

std::string_view language_code(Language language) {
  return language == Language::Greek ? "el" : "en";
}

Language parse_language(std::string_view text) {
  const auto folded = lower_ascii(text);
  if (folded == "en" || folded == "english") return Language::English;
  if (folded == "el" || folded == "greek" || folded == "gr") return Language::Greek;
  throw Error(ErrorCode::Configuration, "unsupported language '" + std::string(text) + "'");
}

std::string_view to_string(PhaseKind kind) {
  for (const auto& [k, name] : kPhaseNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

PhaseKind parse_phase_kind(std::string_view name) {
  for (const auto& [k, n] : kPhaseNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::InvalidInput, "unknown phase '" + std::string(name) + "'");
}

Phase Phase::ask_question(int index) { return make(PhaseKind::AskQuestion, index); }
Phase Phase::await_answer(int index) { return make(PhaseKind::AwaitAnswer, index); }
Phase Phase::extra_questions(int remaining) { return make(PhaseKind::ExtraQuestions, remaining); }

Phase Phase::make(PhaseKind kind, int param) {
  switch (kind) {
    case PhaseKind::AskQuestion:
    case PhaseKind::AwaitAnswer:
      if (param < 1 || param > kQuestionCount) {
        throw Error(ErrorCode::Range, "question index " + std::to_string(param) + " outside 1..7");
      }
      return Phase(kind, param);
    case PhaseKind::ExtraQuestions:
      if (param < 0 || param > kMaxExtraQuestions) {
        throw Error(ErrorCode::Range,
                    "extra question count " + std::to_string(param) + " outside 0..2");
      }
      return Phase(kind, param);
    default:
      if (param != 0) {
        throw Error(ErrorCode::Range,
                    std::string(to_string(kind)) + " takes no parameter");
      }
      return Phase(kind, 0);
  }
}

std::string describe(Phase phase) {
  std::string out(to_string(phase.kind()));
  switch (phase.kind()) {
    case PhaseKind::AskQuestion:
    case PhaseKind::AwaitAnswer:
    case PhaseKind::ExtraQuestions:
      out += "(" + std::to_string(phase.param()) + ")";
      break;
    default:
      break;
  }
  return out;
}

std::string_view to_string(Keyword keyword) {
  switch (keyword) {
    case Keyword::Continue: return "CONTINUE";
    case Keyword::Regenerate: return "REGENERATE";
    case Keyword::Yes: return "YES";
    case Keyword::No: return "NO";
  }
  return "";
}

std::array<Keyword, 2> allowed_keywords(KeywordSet set) {
  if (set == KeywordSet::ContinueRegenerate) return {Keyword::Continue, Keyword::Regenerate};
  return {Keyword::Yes, Keyword::No};
}

std::string_view to_string(KeywordSet set) {
  return set == KeywordSet::ContinueRegenerate ? "CONTINUE/REGENERATE" : "YES/NO";
}

bool ScenarioConfig::complete() const {
  return !audience.empty() && !subject_topic.empty() && !goal.empty() && !format_wishes.empty() &&
         !duration.empty() && !example_templates.empty();
}

}  // namespace lsa::dialog
