#include "lsa/rubric/criteria.hpp"

#include "lsa/error.hpp"

namespace lsa::rubric {

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Quantitative: return "quantitative";
    case CriterionKind::Qualitative: return "qualitative";
    case CriterionKind::Linguistic: return "linguistic";
  }
  return "quantitative";
}

CriterionKind parse_criterion_kind(std::string_view text) {
  for (auto kind : {CriterionKind::Quantitative, CriterionKind::Qualitative,
                    CriterionKind::Linguistic}) {
    if (to_string(kind) == text) return kind;
  }
  throw Error(ErrorCode::InvalidInput, "unknown criterion kind: " + std::string(text));
}

const std::vector<Criterion>& builtin_criteria() {
  using K = CriterionKind;
  static const std::vector<Criterion> criteria{
      {"relevance", "Relevance", K::Quantitative},
      {"accuracy", "Accuracy", K::Quantitative},
      {"creativity", "Creativity", K::Quantitative},
      {"engagement", "Engagement", K::Quantitative},
      {"personalization", "Personalization", K::Quantitative},
      {"coherence", "Coherence", K::Quantitative},
      {"response_time", "Response Time", K::Quantitative},
      {"value_relevance", "Value Relevance", K::Qualitative},
      {"understandability", "Understandability", K::Qualitative},
      {"measurability", "Measurability", K::Qualitative},
      {"non_redundancy", "Non-redundancy", K::Qualitative},
      {"judgmental_independence", "Judgmental Independence", K::Qualitative},
      {"completeness_conciseness", "Balancing Completeness and Conciseness", K::Qualitative},
      {"operationality", "Operationality", K::Qualitative},
      {"simplicity_complexity", "Simplicity vs. Complexity", K::Qualitative},
      {std::string(kTokensCriterion), "Tokens", K::Linguistic},
      {std::string(kMainTopicsCriterion), "Number of Main Topics based on LDA", K::Linguistic},
  };
  return criteria;
}

std::vector<Criterion> criteria_of_kind(CriterionKind kind) {
  std::vector<Criterion> out;
  for (const auto& c : builtin_criteria()) {
    if (c.kind == kind) out.push_back(c);
  }
  return out;
}

const Criterion* find_criterion(std::string_view id) {
  for (const auto& c : builtin_criteria()) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const Criterion& criterion(std::string_view id) {
  if (const auto* c = find_criterion(id)) return *c;
  throw Error(ErrorCode::NotFound, "unknown criterion: " + std::string(id));
}

}  // namespace lsa::rubric
