#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lsa::rubric {

enum class CriterionKind { Quantitative, Qualitative, Linguistic };

std::string_view to_string(CriterionKind kind);
CriterionKind parse_criterion_kind(std::string_view text);

struct Criterion {
  std::string id;
  std::string name;
  CriterionKind kind = CriterionKind::Quantitative;
};

/// Built-in registry in display order: seven quantitative criteria, eight
/// qualitative criteria, then the two linguistic rows.
const std::vector<Criterion>& builtin_criteria();
std::vector<Criterion> criteria_of_kind(CriterionKind kind);

/// nullptr when unknown.
const Criterion* find_criterion(std::string_view id);
/// NotFound when unknown.
const Criterion& criterion(std::string_view id);

inline constexpr std::string_view kTokensCriterion = "tokens";
inline constexpr std::string_view kMainTopicsCriterion = "main_topics";

}  // namespace lsa::rubric
