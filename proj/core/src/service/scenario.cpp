#include "lsa/service/scenario.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "lsa/error.hpp"
#include "util/fs.hpp"

namespace lsa::service {

void validate_id(std::string_view id, std::string_view what) {
  const bool ok = !id.empty() && id.size() <= 128 &&
                  std::all_of(id.begin(), id.end(), [](char c) {
                    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
                  });
  if (!ok) {
    throw Error(ErrorCode::InvalidInput,
                std::string(what) + " must be letters, digits, '-' or '_': '" + std::string(id) +
                    "'");
  }
}

ScenarioFixture parse_scenario(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("scenario is not JSON: ") + e.what());
  }
  try {
    ScenarioFixture s;
    s.scenario_id = j.at("scenario_id").get<std::string>();
    s.language = dialog::parse_language(j.at("language").get<std::string>());
    s.title = j.value("title", "");
    s.level = j.value("level", "");
    s.inputs = j.at("inputs").get<std::vector<std::string>>();
    validate_id(s.scenario_id, "scenario_id");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed scenario: ") + e.what());
  }
}

ScenarioFixture load_scenario(const std::filesystem::path& path) {
  return parse_scenario(util::read_file(path));
}

ScenarioFixture find_scenario(const std::filesystem::path& dir, std::string_view scenario_id) {
  validate_id(scenario_id, "scenario_id");
  const auto path = dir / (std::string(scenario_id) + ".json");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::NotFound, "no scenario fixture " + path.string());
  }
  auto s = load_scenario(path);
  if (s.scenario_id != scenario_id) {
    throw Error(ErrorCode::InvalidInput,
                path.string() + " declares scenario_id '" + s.scenario_id + "'");
  }
  return s;
}

std::vector<ScenarioFixture> load_scenarios(const std::filesystem::path& dir) {
  std::vector<ScenarioFixture> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(load_scenario(entry.path()));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.scenario_id < b.scenario_id; });
  return out;
}

}  // namespace lsa::service
