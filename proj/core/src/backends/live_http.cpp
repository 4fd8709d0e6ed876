#include "lsa/backends/live_http.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "lsa/error.hpp"

namespace lsa::backends {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // "/v1/chat/completions"
};

Endpoint parse_endpoint(const std::string& base) {
  const auto scheme_end = base.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::Configuration, "endpoint must start with http:// or https://: " + base);
  }
  const auto path_start = base.find('/', scheme_end + 3);
  Endpoint endpoint;
  endpoint.origin = base.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? std::string() : base.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  endpoint.path = prefix + "/chat/completions";
  return endpoint;
}

std::string scrub(std::string text, const std::string& secret) {
  if (secret.empty()) return text;
  for (auto pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos)) {
    text.replace(pos, secret.size(), "***");
  }
  return text;
}

std::string error_body_excerpt(const std::string& body) {
  constexpr std::size_t kMax = 300;
  return body.size() > kMax ? body.substr(0, kMax) + "..." : body;
}

}  // namespace

LiveHttpBackend::LiveHttpBackend(HttpOptions options) : options_(std::move(options)) {
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  if (!options_.lookup_env) {
    options_.lookup_env = [](const std::string& name) -> std::optional<std::string> {
      const char* value = std::getenv(name.c_str());
      if (!value) return std::nullopt;
      return std::string(value);
    };
  }
  if (!options_.clock) options_.clock = steady_monotonic_clock();
  if (options_.max_attempts < 1) options_.max_attempts = 1;
}

CompletionResult LiveHttpBackend::complete(const ModelSpec& spec, const ChatHistory& history) {
  validate_history(history);
  if (spec.endpoint.empty()) {
    throw Error(ErrorCode::Configuration, "model '" + spec.id + "' has no endpoint");
  }
  const auto endpoint = parse_endpoint(spec.endpoint);

  std::string key;
  if (!spec.api_key_env.empty()) {
    const auto value = options_.lookup_env(spec.api_key_env);
    if (!value || value->empty()) {
      throw Error(ErrorCode::Auth, "environment variable " + spec.api_key_env + " is not set");
    }
    key = *value;
  }

  nlohmann::ordered_json body;
  body["model"] = spec.remote_model.empty() ? spec.id : spec.remote_model;
  auto& messages = body["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : history) messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  body["temperature"] = spec.temperature;
  if (spec.max_tokens > 0) body["max_tokens"] = spec.max_tokens;
  const auto payload = body.dump();

  httplib::Headers headers;
  if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

  auto attempt_once = [&]() -> CompletionResult {
    httplib::Client client(endpoint.origin);
    const auto timeout = static_cast<time_t>(options_.timeout.count());
    client.set_connection_timeout(timeout, 0);
    client.set_read_timeout(timeout, 0);
    client.set_write_timeout(timeout, 0);

    const auto start = options_.clock();
    auto response = client.Post(endpoint.path, headers, payload, "application/json");
    const auto stop = options_.clock();
    const auto latency =
        std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();

    if (!response) {
      throw Error(ErrorCode::Network, "request to " + endpoint.origin + " failed: " +
                                          httplib::to_string(response.error()));
    }
    const int status = response->status;
    if (status == 401 || status == 403) {
      throw Error(ErrorCode::Auth, "authentication rejected (HTTP " + std::to_string(status) + ")");
    }
    if (status == 429) {
      throw Error(ErrorCode::RateLimited, "rate limited (HTTP 429)");
    }
    if (status >= 500) {
      throw Error(ErrorCode::Network, "server error (HTTP " + std::to_string(status) + "): " +
                                          error_body_excerpt(response->body));
    }
    if (status < 200 || status >= 300) {
      throw Error(ErrorCode::Backend, "unexpected HTTP " + std::to_string(status) + ": " +
                                          error_body_excerpt(response->body));
    }

    CompletionResult result;
    try {
      const auto j = nlohmann::json::parse(response->body);
      const auto& choice = j.at("choices").at(0);
      result.text = choice.at("message").at("content").get<std::string>();
      result.truncated = choice.value("finish_reason", std::string()) == "length";
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Backend, std::string("malformed completion response: ") + e.what());
    }
    if (result.text.empty()) throw Error(ErrorCode::Backend, "model returned empty content");
    result.latency_ms = latency < 0 ? 0 : latency;
    result.model_id = spec.id;
    return result;
  };

  auto backoff = options_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return attempt_once();
    } catch (const Error& e) {
      if (!e.retriable() || attempt >= options_.max_attempts) {
        throw Error(e.code(), scrub(e.what(), key));
      }
    }
    options_.sleep(backoff);
    backoff *= 2;
  }
}

}  // namespace lsa::backends
