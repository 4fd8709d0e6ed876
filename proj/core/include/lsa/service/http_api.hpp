#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "lsa/backends/registry.hpp"
#include "lsa/clock.hpp"

namespace lsa::service {

struct ApiConfig {
  std::filesystem::path store_dir;
  /// GET /reports/{id} serves <reports_dir>/<id>/report.json.
  std::filesystem::path reports_dir;
  /// Session backends come from here unless `factory` is set.
  backends::ModelRegistry registry;
  std::function<std::unique_ptr<backends::ChatBackend>(const backends::ModelSpec&,
                                                       const std::string& scenario_id)>
      factory;
  WallClock clock = system_wall_clock();
};

/// JSON API over sessions and reports:
///
///   POST /sessions                 {"model_id", "language", "scenario_id"?, "config"?}
///                                  -> 201 {"session_id", "phase", "action", "events"}
///   GET  /sessions/{id}            -> {"session_id", "model_id", "scenario_id", "phase",
///                                      "state", "action", "events"}
///   POST /sessions/{id}/input      {"text"} -> {"session_id", "phase", "reask",
///                                               "warnings", "action"}
///   POST /sessions/{id}/retry      re-sends a model prompt after a backend failure
///   GET  /sessions/{id}/draft      -> {"session_id", "phase", "draft", "final"}
///   GET  /reports/{id}             -> stored report.json
///
/// Errors are {"error", "code", "retriable"} with 400 (bad body), 404
/// (unknown session or report), 409 (input out of phase, session busy) or
/// 502 (backend failure). Requests on one session are serialized.
class ApiServer {
 public:
  explicit ApiServer(ApiConfig config);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds and serves until stop(); returns false if binding failed.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it (-1 on failure); call
  /// listen_after_bind() to serve.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lsa::service
