#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/backends/chat.hpp"
#include "lsa/backends/live_http.hpp"

namespace lsa::backends {

/// Ordered set of model specs loaded from a JSON registry file:
///
///   {"models": [{"id": "...", "display_name": "...", "backend": "replay",
///                "fixture_dir": "replay/chatgpt-4"},
///               {"id": "...", "backend": "live", "endpoint": "https://...",
///                "model": "gpt-4o", "api_key_env": "OPENAI_API_KEY",
///                "params": {"temperature": 0.7, "max_tokens": 2048}}]}
///
/// Relative fixture_dir paths resolve against the registry file location.
class ModelRegistry {
 public:
  static ModelRegistry load(const std::filesystem::path& path);
  static ModelRegistry parse(std::string_view json, const std::filesystem::path& base_dir);

  void add(ModelSpec spec);
  const ModelSpec& get(std::string_view id) const;
  bool contains(std::string_view id) const;
  const std::vector<ModelSpec>& models() const noexcept { return models_; }
  std::vector<std::string> ids() const;

 private:
  std::vector<ModelSpec> models_;
};

/// Backend for one session. Replay specs resolve their fixture as
/// fixture_dir/<scenario_id>.ndjson unless `fixture_override` is given.
std::unique_ptr<ChatBackend> make_backend(const ModelSpec& spec, std::string_view scenario_id,
                                          const std::filesystem::path& fixture_override = {},
                                          const HttpOptions& http = {});

std::filesystem::path fixture_path_for(const ModelSpec& spec, std::string_view scenario_id);

}  // namespace lsa::backends
