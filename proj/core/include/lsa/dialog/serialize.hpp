#pragma once

#include <string>
#include <string_view>

#include "lsa/dialog/protocol.hpp"

namespace lsa::dialog {

/// Compact JSON with a fixed field order; decode(encode(s)) == s.
std::string encode_state(const DialogState& state);
DialogState decode_state(std::string_view json);

std::string encode_config(const ScenarioConfig& config);
ScenarioConfig decode_config(std::string_view json);

std::string encode_action(const AssistantAction& action);

}  // namespace lsa::dialog
