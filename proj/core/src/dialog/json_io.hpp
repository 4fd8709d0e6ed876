#pragma once

#include <json.hpp>

#include "lsa/dialog/protocol.hpp"

namespace lsa::dialog {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const DialogState& state);
DialogState state_from_json(const nlohmann::json& j);

ordered_json to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const nlohmann::json& j);

ordered_json to_json(const AssistantAction& action);

}  // namespace lsa::dialog
