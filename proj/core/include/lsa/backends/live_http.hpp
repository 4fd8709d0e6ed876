#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include "lsa/backends/chat.hpp"
#include "lsa/clock.hpp"

namespace lsa::backends {

struct HttpOptions {
  std::chrono::seconds timeout{120};
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  MonotonicClock clock = steady_monotonic_clock();
  std::function<void(std::chrono::milliseconds)> sleep;
  /// Resolves the API key variable named by the spec. Defaults to getenv.
  std::function<std::optional<std::string>(const std::string&)> lookup_env;
};

/// OpenAI-style POST {endpoint}/chat/completions. Latency covers the whole
/// HTTP exchange of the successful attempt. Rate limits, 5xx responses and
/// connection failures are retried with exponential backoff; the API key is
/// scrubbed from every error message.
class LiveHttpBackend final : public ChatBackend {
 public:
  explicit LiveHttpBackend(HttpOptions options = {});

  CompletionResult complete(const ModelSpec& spec, const ChatHistory& history) override;

 private:
  HttpOptions options_;
};

}  // namespace lsa::backends
