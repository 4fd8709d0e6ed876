#include "lsa/service/http_api.hpp"

#include <map>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "dialog/json_io.hpp"
#include "lsa/error.hpp"
#include "lsa/service/runner.hpp"
#include "lsa/service/scenario.hpp"
#include "util/fs.hpp"

namespace lsa::service {

namespace {

using nlohmann::ordered_json;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Protocol:
    case ErrorCode::ProtocolExhausted:
    case ErrorCode::Conflict:
    case ErrorCode::Locked: return 409;
    case ErrorCode::InvalidInput:
    case ErrorCode::Configuration:
    case ErrorCode::Range: return 400;
    case ErrorCode::Backend:
    case ErrorCode::Network:
    case ErrorCode::Auth:
    case ErrorCode::RateLimited:
    case ErrorCode::ReplayExhausted:
    case ErrorCode::ReplayMismatch: return 502;
    default: return 500;
  }
}

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e, const std::string& session_id = {}) {
  ordered_json body;
  body["error"] = e.what();
  body["code"] = to_string(e.code());
  body["retriable"] = e.retriable();
  if (!session_id.empty()) body["session_id"] = session_id;
  send_json(res, status_for(e.code()), body);
}

ordered_json events_json(const std::vector<store::TranscriptEvent>& events) {
  auto out = ordered_json::array();
  for (const auto& e : events) out.push_back(ordered_json::parse(store::encode_event(e)));
  return out;
}

ordered_json action_json(const std::optional<dialog::AssistantAction>& action) {
  return action ? dialog::to_json(*action) : ordered_json(nullptr);
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    auto j = nlohmann::json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

struct ApiServer::Impl {
  explicit Impl(ApiConfig c) : config(std::move(c)), store(config.store_dir) { routes(); }

  ApiConfig config;
  store::SessionStore store;
  httplib::Server server;
  std::mutex locks_mutex;
  std::map<std::string, std::shared_ptr<std::mutex>> locks;

  std::shared_ptr<std::mutex> lock_for(const std::string& id) {
    std::lock_guard guard(locks_mutex);
    auto& slot = locks[id];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
  }

  std::unique_ptr<backends::ChatBackend> backend_for(const backends::ModelSpec& spec,
                                                     const std::string& scenario_id) {
    if (config.factory) return config.factory(spec, scenario_id);
    if (spec.backend_kind == backends::BackendKind::Replay && scenario_id.empty()) {
      throw Error(ErrorCode::InvalidInput, "replay models need a scenario_id");
    }
    return backends::make_backend(spec, scenario_id);
  }

  void require_session(const std::string& id) {
    validate_id(id, "session id");
    if (!store.exists(id)) throw Error(ErrorCode::NotFound, "unknown session " + id);
  }

  // Handler wrapper turning library errors into JSON error responses.
  template <typename F>
  httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        send_error(res, Error(ErrorCode::Io, e.what()));
      }
    };
  }

  void create_session(const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body.contains("model_id") || !body["model_id"].is_string()) {
      throw Error(ErrorCode::InvalidInput, "model_id is required");
    }
    const auto& spec = config.registry.get(body["model_id"].get<std::string>());
    store::SessionMeta meta;
    meta.model_id = spec.id;
    meta.scenario_id = body.value("scenario_id", "");
    if (!meta.scenario_id.empty()) validate_id(meta.scenario_id, "scenario_id");
    try {
      if (body.contains("config")) meta.config = dialog::config_from_json(body["config"]);
      if (body.contains("language")) {
        meta.config.language = dialog::parse_language(body["language"].get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidInput, std::string("bad session request: ") + e.what());
    }
    auto backend = backend_for(spec, meta.scenario_id);
    auto session = Session::create(store, meta, *backend, spec, {config.clock, nullptr});
    const auto id = session.meta().session_id;
    auto guard = lock_for(id);
    std::lock_guard lock(*guard);
    try {
      session.advance();
    } catch (const Error& e) {
      send_error(res, e, id);
      return;
    }
    ordered_json out;
    out["session_id"] = id;
    out["phase"] = dialog::describe(session.state().phase);
    out["action"] = action_json(session.pending());
    out["events"] = events_json(session.events());
    send_json(res, 201, out);
  }

  void get_session(const std::string& id, httplib::Response& res) {
    require_session(id);
    auto guard = lock_for(id);
    std::lock_guard lock(*guard);
    const auto loaded = store.load_session(id);
    ordered_json out;
    out["session_id"] = id;
    out["model_id"] = loaded.meta.model_id;
    out["scenario_id"] = loaded.meta.scenario_id;
    out["phase"] = dialog::describe(loaded.state.phase);
    out["state"] = dialog::to_json(loaded.state);
    out["action"] = action_json(pending_action(loaded.state));
    out["events"] = events_json(loaded.events);
    send_json(res, 200, out);
  }

  Session open_session(const std::string& id, std::unique_ptr<backends::ChatBackend>& backend) {
    const auto meta = store.read_meta(id);
    const auto& spec = config.registry.get(meta.model_id);
    backend = backend_for(spec, meta.scenario_id);
    return Session::open(store, id, *backend, spec, {config.clock, nullptr});
  }

  void post_input(const std::string& id, const httplib::Request& req, httplib::Response& res) {
    require_session(id);
    const auto body = parse_body(req);
    if (!body.contains("text") || !body["text"].is_string()) {
      throw Error(ErrorCode::InvalidInput, "text is required");
    }
    auto guard = lock_for(id);
    std::lock_guard lock(*guard);
    std::unique_ptr<backends::ChatBackend> backend;
    auto session = open_session(id, backend);
    if (!session.awaiting_user()) {
      throw Error(ErrorCode::Protocol,
                  session.done() ? "session is finished"
                                 : "session is waiting for the model; POST /retry");
    }
    SubmitResult result;
    try {
      result = session.submit(body["text"].get<std::string>());
    } catch (const Error& e) {
      send_error(res, e, id);
      return;
    }
    ordered_json out;
    out["session_id"] = id;
    out["phase"] = dialog::describe(session.state().phase);
    out["reask"] = result.reask;
    out["warnings"] = result.warnings;
    out["action"] = action_json(session.pending());
    send_json(res, 200, out);
  }

  void post_retry(const std::string& id, httplib::Response& res) {
    require_session(id);
    auto guard = lock_for(id);
    std::lock_guard lock(*guard);
    std::unique_ptr<backends::ChatBackend> backend;
    auto session = open_session(id, backend);
    if (session.pending()) throw Error(ErrorCode::Protocol, "no model call is pending");
    try {
      session.advance();
    } catch (const Error& e) {
      send_error(res, e, id);
      return;
    }
    ordered_json out;
    out["session_id"] = id;
    out["phase"] = dialog::describe(session.state().phase);
    out["action"] = action_json(session.pending());
    send_json(res, 200, out);
  }

  void get_draft(const std::string& id, httplib::Response& res) {
    require_session(id);
    auto guard = lock_for(id);
    std::lock_guard lock(*guard);
    const auto loaded = store.load_session(id);
    const bool final = loaded.state.phase.is(dialog::PhaseKind::Done);
    ordered_json out;
    out["session_id"] = id;
    out["phase"] = dialog::describe(loaded.state.phase);
    out["draft"] = final ? loaded.state.final_plan : loaded.state.current_draft;
    out["final"] = final;
    send_json(res, 200, out);
  }

  void get_report(const std::string& id, httplib::Response& res) {
    validate_id(id, "report id");
    const auto path = config.reports_dir / id / "report.json";
    if (config.reports_dir.empty() || !std::filesystem::exists(path)) {
      throw Error(ErrorCode::NotFound, "unknown report " + id);
    }
    res.status = 200;
    res.set_content(util::read_file(path), "application/json");
  }

  void routes() {
    constexpr auto id_pattern = "([A-Za-z0-9_-]+)";
    const std::string sessions = "/sessions/";
    server.Post("/sessions", guarded([this](const auto& req, auto& res) {
                  create_session(req, res);
                }));
    server.Get(sessions + id_pattern, guarded([this](const auto& req, auto& res) {
                 get_session(req.matches[1], res);
               }));
    server.Post(sessions + id_pattern + "/input", guarded([this](const auto& req, auto& res) {
                  post_input(req.matches[1], req, res);
                }));
    server.Post(sessions + id_pattern + "/retry", guarded([this](const auto& req, auto& res) {
                  post_retry(req.matches[1], res);
                }));
    server.Get(sessions + id_pattern + "/draft", guarded([this](const auto& req, auto& res) {
                 get_draft(req.matches[1], res);
               }));
    server.Get(std::string("/reports/") + id_pattern, guarded([this](const auto& req, auto& res) {
                 get_report(req.matches[1], res);
               }));
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      ordered_json body;
      body["error"] = res.status == 404 ? "no such endpoint" : "request failed";
      body["code"] = res.status == 404 ? "not_found" : "invalid_input";
      body["retriable"] = false;
      res.set_content(body.dump(), "application/json");
    });
  }
};

ApiServer::ApiServer(ApiConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int ApiServer::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool ApiServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool ApiServer::running() const { return impl_->server.is_running(); }

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace lsa::service
