#include "lsa/dialog/serialize.hpp"

#include "dialog/json_io.hpp"
#include "lsa/error.hpp"

namespace lsa::dialog {

ordered_json to_json(const DialogState& state) {
  ordered_json answers = ordered_json::object();
  for (const auto& [index, text] : state.answers) answers[std::to_string(index)] = text;
  ordered_json j;
  j["session_id"] = state.session_id;
  j["phase"] = {{"kind", to_string(state.phase.kind())}, {"param", state.phase.param()}};
  j["language"] = language_code(state.language);
  j["answers"] = std::move(answers);
  j["extra_questions"] = state.extra_questions;
  j["extra_answers"] = state.extra_answers;
  j["draft_count"] = state.draft_count;
  j["improvement_rounds"] = state.improvement_rounds;
  j["prompt_issued"] = state.prompt_issued;
  j["draft_pending"] = state.draft_pending;
  j["finish_consumed"] = state.finish_consumed;
  j["current_draft"] = state.current_draft;
  j["pending_request"] = state.pending_request;
  j["edited_plan"] = state.edited_plan;
  j["final_plan"] = state.final_plan;
  return j;
}

DialogState state_from_json(const nlohmann::json& j) {
  try {
    DialogState state;
    state.session_id = j.at("session_id").get<std::string>();
    const auto& phase = j.at("phase");
    state.phase = Phase::make(parse_phase_kind(phase.at("kind").get<std::string>()),
                              phase.at("param").get<int>());
    state.language = parse_language(j.at("language").get<std::string>());
    for (const auto& [key, value] : j.at("answers").items()) {
      const int index = std::stoi(key);
      if (index < 1 || index > kQuestionCount) {
        throw Error(ErrorCode::InvalidInput, "answer index out of range: " + key);
      }
      state.answers[index] = value.get<std::string>();
    }
    state.extra_questions = j.at("extra_questions").get<std::vector<std::string>>();
    state.extra_answers = j.at("extra_answers").get<std::vector<std::string>>();
    state.draft_count = j.at("draft_count").get<int>();
    state.improvement_rounds = j.at("improvement_rounds").get<int>();
    state.prompt_issued = j.at("prompt_issued").get<bool>();
    state.draft_pending = j.at("draft_pending").get<bool>();
    state.finish_consumed = j.at("finish_consumed").get<bool>();
    state.current_draft = j.at("current_draft").get<std::string>();
    state.pending_request = j.at("pending_request").get<std::string>();
    state.edited_plan = j.at("edited_plan").get<std::string>();
    state.final_plan = j.at("final_plan").get<std::string>();
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed dialog state: ") + e.what());
  }
}

ordered_json to_json(const ScenarioConfig& config) {
  ordered_json j;
  j["audience"] = config.audience;
  j["subject_topic"] = config.subject_topic;
  j["goal"] = config.goal;
  j["format_wishes"] = config.format_wishes;
  j["duration"] = config.duration;
  j["example_templates"] = config.example_templates;
  j["language"] = language_code(config.language);
  return j;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  try {
    ScenarioConfig config;
    auto field = [&](const char* name) { return j.value(name, std::string()); };
    config.audience = field("audience");
    config.subject_topic = field("subject_topic");
    config.goal = field("goal");
    config.format_wishes = field("format_wishes");
    config.duration = field("duration");
    config.example_templates = field("example_templates");
    config.language = parse_language(j.value("language", std::string("en")));
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed scenario config: ") + e.what());
  }
}

ordered_json to_json(const AssistantAction& action) {
  ordered_json j;
  j["type"] = action_name(action);
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, SendToModel>) {
          j["prompt"] = a.prompt;
        } else if constexpr (std::is_same_v<T, AskUser>) {
          j["question"] = a.question;
          if (a.keywords) {
            j["expected"] = "keywords";
            ordered_json allowed = ordered_json::array();
            for (const auto k : allowed_keywords(*a.keywords)) allowed.push_back(to_string(k));
            j["keywords"] = std::move(allowed);
          } else {
            j["expected"] = "free_text";
          }
        } else if constexpr (std::is_same_v<T, PresentDraft>) {
          j["text"] = a.text;
        } else {
          j["final_plan"] = a.final_plan;
        }
      },
      action);
  return j;
}

std::string encode_state(const DialogState& state) { return to_json(state).dump(); }

DialogState decode_state(std::string_view json) {
  try {
    return state_from_json(nlohmann::json::parse(json));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("dialog state is not JSON: ") + e.what());
  }
}

std::string encode_config(const ScenarioConfig& config) { return to_json(config).dump(); }

ScenarioConfig decode_config(std::string_view json) {
  try {
    return config_from_json(nlohmann::json::parse(json));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("scenario config is not JSON: ") + e.what());
  }
}

std::string encode_action(const AssistantAction& action) { return to_json(action).dump(); }

}  // namespace lsa::dialog
