#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lsa::backends {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using ChatHistory = std::vector<ChatMessage>;

struct CompletionResult {
  std::string text;
  long long latency_ms = 0;
  std::string model_id;
  bool truncated = false;

  friend bool operator==(const CompletionResult&, const CompletionResult&) = default;
};

enum class BackendKind { LiveHttp, Replay };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view text);

/// One entry of the model registry. Live specs talk to an OpenAI-style
/// endpoint; replay specs read fixtures from fixture_dir/<scenario>.ndjson.
struct ModelSpec {
  std::string id;
  std::string display_name;
  BackendKind backend_kind = BackendKind::Replay;
  std::string endpoint;
  /// Remote model name sent in the request body; defaults to id.
  std::string remote_model;
  /// Name of the environment variable holding the API key. Never the key.
  std::string api_key_env;
  std::filesystem::path fixture_dir;
  double temperature = 0.7;
  int max_tokens = 0;
};

/// Uniform chat-completion interface. Implementations must be safe to call
/// from several sessions concurrently.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual CompletionResult complete(const ModelSpec& spec, const ChatHistory& history) = 0;
};

/// Non-empty, last message from user or system, user/assistant turns
/// non-empty. InvalidInput otherwise.
void validate_history(const ChatHistory& history);

/// Canonical text form used for fixture keys: CRLF folded to LF, trailing
/// whitespace of each message trimmed, compact JSON array of {role, content}.
std::string normalize_history(const ChatHistory& history);

/// SHA-256 (hex) of normalize_history.
std::string history_hash(const ChatHistory& history);

/// Number of assistant turns, i.e. the replay position of the next reply.
std::size_t assistant_turns(const ChatHistory& history);

}  // namespace lsa::backends
