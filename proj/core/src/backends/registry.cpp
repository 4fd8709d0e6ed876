#include "lsa/backends/registry.hpp"

#include <json.hpp>

#include "lsa/backends/replay.hpp"
#include "lsa/error.hpp"
#include "util/fs.hpp"

namespace lsa::backends {

ModelRegistry ModelRegistry::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::Configuration, "model registry not found: " + path.string());
  }
  return parse(util::read_file(path), path.parent_path());
}

ModelRegistry ModelRegistry::parse(std::string_view json, const std::filesystem::path& base_dir) {
  ModelRegistry registry;
  try {
    const auto j = nlohmann::json::parse(json);
    for (const auto& m : j.at("models")) {
      ModelSpec spec;
      spec.id = m.at("id").get<std::string>();
      spec.display_name = m.value("display_name", spec.id);
      spec.backend_kind = parse_backend_kind(m.value("backend", std::string("replay")));
      spec.endpoint = m.value("endpoint", std::string());
      spec.remote_model = m.value("model", std::string());
      spec.api_key_env = m.value("api_key_env", std::string());
      if (m.contains("api_key")) {
        throw Error(ErrorCode::Configuration,
                    "model '" + spec.id + "': put the key in an environment variable and "
                    "reference it with api_key_env");
      }
      if (m.contains("fixture_dir")) {
        std::filesystem::path dir = m.at("fixture_dir").get<std::string>();
        spec.fixture_dir = dir.is_absolute() ? dir : base_dir / dir;
      }
      if (m.contains("params")) {
        const auto& params = m.at("params");
        spec.temperature = params.value("temperature", spec.temperature);
        spec.max_tokens = params.value("max_tokens", spec.max_tokens);
      }
      registry.add(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Configuration, std::string("malformed model registry: ") + e.what());
  }
  return registry;
}

void ModelRegistry::add(ModelSpec spec) {
  if (spec.id.empty()) throw Error(ErrorCode::Configuration, "model id must not be empty");
  if (contains(spec.id)) {
    throw Error(ErrorCode::Conflict, "duplicate model id '" + spec.id + "'");
  }
  if (spec.backend_kind == BackendKind::LiveHttp && spec.endpoint.empty()) {
    throw Error(ErrorCode::Configuration, "live model '" + spec.id + "' needs an endpoint");
  }
  if (spec.display_name.empty()) spec.display_name = spec.id;
  models_.push_back(std::move(spec));
}

const ModelSpec& ModelRegistry::get(std::string_view id) const {
  for (const auto& spec : models_) {
    if (spec.id == id) return spec;
  }
  throw Error(ErrorCode::NotFound, "unknown model '" + std::string(id) + "'");
}

bool ModelRegistry::contains(std::string_view id) const {
  for (const auto& spec : models_) {
    if (spec.id == id) return true;
  }
  return false;
}

std::vector<std::string> ModelRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(models_.size());
  for (const auto& spec : models_) out.push_back(spec.id);
  return out;
}

std::filesystem::path fixture_path_for(const ModelSpec& spec, std::string_view scenario_id) {
  return spec.fixture_dir / (std::string(scenario_id) + ".ndjson");
}

std::unique_ptr<ChatBackend> make_backend(const ModelSpec& spec, std::string_view scenario_id,
                                          const std::filesystem::path& fixture_override,
                                          const HttpOptions& http) {
  if (spec.backend_kind == BackendKind::LiveHttp && fixture_override.empty()) {
    return std::make_unique<LiveHttpBackend>(http);
  }
  const auto path = fixture_override.empty() ? fixture_path_for(spec, scenario_id) : fixture_override;
  return std::make_unique<ReplayBackend>(ReplayBackend::from_file(path));
}

}  // namespace lsa::backends
