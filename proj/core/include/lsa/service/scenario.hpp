#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/dialog/types.hpp"

namespace lsa::service {

/// Canned teacher side of a headless session:
///
///   {"scenario_id": "dh-university-en", "language": "en",
///    "title": "...", "level": "university",
///    "inputs": ["answer to question 1", ..., "CONTINUE", ...]}
///
/// `inputs` are consumed in order, one per AskUser action.
struct ScenarioFixture {
  std::string scenario_id;
  dialog::Language language = dialog::Language::English;
  std::string title;
  std::string level;
  std::vector<std::string> inputs;
};

ScenarioFixture parse_scenario(std::string_view json);
ScenarioFixture load_scenario(const std::filesystem::path& path);
/// Loads <dir>/<scenario_id>.json; NotFound when missing.
ScenarioFixture find_scenario(const std::filesystem::path& dir, std::string_view scenario_id);
/// Every *.json in the directory, ordered by scenario id.
std::vector<ScenarioFixture> load_scenarios(const std::filesystem::path& dir);

/// Letters, digits, '-' and '_' only; InvalidInput otherwise. Ids end up
/// in file names.
void validate_id(std::string_view id, std::string_view what);

}  // namespace lsa::service
