#include "lsa/backends/chat.hpp"

#include <json.hpp>

#include "lsa/error.hpp"
#include "util/hash.hpp"

namespace lsa::backends {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

Role parse_role(std::string_view text) {
  if (text == "system") return Role::System;
  if (text == "user") return Role::User;
  if (text == "assistant") return Role::Assistant;
  throw Error(ErrorCode::InvalidInput, "unknown chat role '" + std::string(text) + "'");
}

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::LiveHttp ? "live" : "replay";
}

BackendKind parse_backend_kind(std::string_view text) {
  if (text == "live" || text == "live_http" || text == "http") return BackendKind::LiveHttp;
  if (text == "replay") return BackendKind::Replay;
  throw Error(ErrorCode::Configuration, "unknown backend kind '" + std::string(text) + "'");
}

void validate_history(const ChatHistory& history) {
  if (history.empty()) throw Error(ErrorCode::InvalidInput, "chat history is empty");
  if (history.back().role == Role::Assistant) {
    throw Error(ErrorCode::InvalidInput, "chat history must end with a user or system message");
  }
  for (const auto& message : history) {
    if (message.role != Role::System && message.content.empty()) {
      throw Error(ErrorCode::InvalidInput, "user and assistant messages must be non-empty");
    }
  }
}

std::string normalize_history(const ChatHistory& history) {
  auto normalize = [](const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
      out += text[i];
    }
    while (!out.empty() && (out.back() == ' ' || out.back() == '\t' || out.back() == '\n' ||
                            out.back() == '\r')) {
      out.pop_back();
    }
    return out;
  };
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const auto& message : history) {
    array.push_back({{"role", to_string(message.role)}, {"content", normalize(message.content)}});
  }
  return array.dump();
}

std::string history_hash(const ChatHistory& history) {
  return util::sha256_hex(normalize_history(history));
}

std::size_t assistant_turns(const ChatHistory& history) {
  std::size_t n = 0;
  for (const auto& message : history) n += message.role == Role::Assistant ? 1 : 0;
  return n;
}

}  // namespace lsa::backends
