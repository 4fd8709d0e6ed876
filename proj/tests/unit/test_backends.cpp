#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "lsa/backends/live_http.hpp"
#include "lsa/backends/registry.hpp"
#include "lsa/backends/replay.hpp"
#include "lsa/error.hpp"
#include "test_support.hpp"

using namespace lsa;
using namespace lsa::backends;

namespace {

ChatHistory history_of(std::initializer_list<std::pair<Role, std::string>> turns) {
  ChatHistory h;
  for (const auto& [role, content] : turns) h.push_back({role, content});
  return h;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

/// Local OpenAI-style endpoint that answers from a queue of (status, body).
class FakeServer {
 public:
  explicit FakeServer(std::vector<std::pair<int, std::string>> responses)
      : responses_(std::move(responses)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      requests_.push_back(req.body);
      authorization_.push_back(req.get_header_value("Authorization"));
      const auto i = std::min(next_++, responses_.size() - 1);
      res.status = responses_[i].first;
      res.set_content(responses_[i].second, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  std::vector<std::string> requests_;
  std::vector<std::string> authorization_;

 private:
  httplib::Server server_;
  std::vector<std::pair<int, std::string>> responses_;
  std::size_t next_ = 0;
  int port_ = 0;
  std::thread thread_;
};

std::string completion_body(const std::string& text, const std::string& finish = "stop") {
  nlohmann::json j;
  j["choices"] = nlohmann::json::array({{{"message", {{"role", "assistant"}, {"content", text}}},
                                         {"finish_reason", finish}}});
  return j.dump();
}

ModelSpec live_spec(const std::string& endpoint) {
  ModelSpec spec;
  spec.id = "fake";
  spec.backend_kind = BackendKind::LiveHttp;
  spec.endpoint = endpoint;
  spec.remote_model = "fake-remote";
  spec.api_key_env = "FAKE_KEY";
  return spec;
}

HttpOptions fake_options(std::vector<std::chrono::milliseconds>& sleeps) {
  HttpOptions options;
  options.timeout = std::chrono::seconds(5);
  options.sleep = [&sleeps](std::chrono::milliseconds d) { sleeps.push_back(d); };
  options.lookup_env = [](const std::string& name) -> std::optional<std::string> {
    if (name == "FAKE_KEY") return std::string("sk-secret-123");
    return std::nullopt;
  };
  auto tick = std::make_shared<std::chrono::steady_clock::time_point>();
  options.clock = [tick] {
    *tick += std::chrono::milliseconds(250);
    return *tick;
  };
  return options;
}

}  // namespace

TEST_CASE("history normalization folds CRLF and trailing whitespace") {
  const auto a = history_of({{Role::User, "Hello\r\nworld  \n"}});
  const auto b = history_of({{Role::User, "Hello\nworld"}});
  CHECK(normalize_history(a) == normalize_history(b));
  CHECK(history_hash(a) == history_hash(b));
  CHECK(history_hash(a).size() == 64);
  CHECK(history_hash(a) != history_hash(history_of({{Role::User, "Hello world"}})));
}

TEST_CASE("history hash is the SHA-256 of the canonical form") {
  const auto h = history_of({{Role::User, "x"}});
  CHECK(normalize_history(h) == R"([{"role":"user","content":"x"}])");
  // Computed with Python's hashlib over the string above.
  CHECK(history_hash(h) == "aa97aaaade8ba2434d8f425b2568ff44673185dedebbb248eede8324edd582a1");
}

TEST_CASE("history validation") {
  CHECK_THROWS_AS(validate_history({}), Error);
  CHECK_THROWS_AS(validate_history(history_of({{Role::User, "a"}, {Role::Assistant, "b"}})), Error);
  CHECK_THROWS_AS(validate_history(history_of({{Role::User, ""}})), Error);
  CHECK_NOTHROW(validate_history(history_of({{Role::System, "s"}, {Role::User, "a"}})));
  CHECK(assistant_turns(history_of({{Role::User, "a"}, {Role::Assistant, "b"}, {Role::User, "c"}})) == 1);
}

TEST_CASE("fixture records round-trip and reject bad input") {
  const FixtureRecord r{"abc", "Γειά σου\n\"κόσμε\"", 42};
  CHECK(decode_fixture_record(encode_fixture_record(r)) == r);
  CHECK_THROWS_AS(decode_fixture_record("{}"), Error);
  CHECK_THROWS_AS(decode_fixture_record(R"({"request_hash":"a","response_text":"b","latency_ms":-1})"), Error);
  test::TempDir dir;
  write_fixture(dir / "f.ndjson", {r, r});
  CHECK(read_fixture(dir / "f.ndjson").size() == 2);
  CHECK(code_of([&] { read_fixture(dir / "missing.ndjson"); }) == ErrorCode::NotFound);
}

TEST_CASE("replay serves turns by position and checks hashes in strict mode") {
  const auto h1 = history_of({{Role::User, "first"}});
  const auto h2 = history_of({{Role::User, "first"}, {Role::Assistant, "r1"}, {Role::User, "second"}});
  ReplayBackend strict({{history_hash(h1), "r1", 100}, {history_hash(h2), "r2", 200}});
  ModelSpec spec;
  spec.id = "m";
  const auto a = strict.complete(spec, h1);
  CHECK(a.text == "r1");
  CHECK(a.latency_ms == 100);
  CHECK(a.model_id == "m");
  CHECK(strict.complete(spec, h2).text == "r2");
  CHECK(strict.complete(spec, h1).text == "r1");

  const auto altered = history_of({{Role::User, "first!"}});
  CHECK(code_of([&] { strict.complete(spec, altered); }) == ErrorCode::ReplayMismatch);
  ReplayBackend lax({{history_hash(h1), "r1", 100}}, false);
  CHECK(lax.complete(spec, altered).text == "r1");

  const auto h3 = history_of({{Role::User, "a"}, {Role::Assistant, "b"}, {Role::User, "c"},
                              {Role::Assistant, "d"}, {Role::User, "e"}});
  CHECK(code_of([&] { strict.complete(spec, h3); }) == ErrorCode::ReplayExhausted);
}

TEST_CASE("recording then replaying reproduces the scripted replies") {
  test::TempDir dir;
  ScriptedBackend scripted({{"one", 5}, {"two", 7}});
  ModelSpec spec;
  spec.id = "m";
  const auto h1 = history_of({{Role::User, "q1"}});
  const auto h2 = history_of({{Role::User, "q1"}, {Role::Assistant, "one"}, {Role::User, "q2"}});
  const auto path = dir / "nested/m/s.ndjson";
  const auto recorded = record_session(scripted, spec, {h1, h2}, path);
  REQUIRE(recorded.size() == 2);
  auto replay = ReplayBackend::from_file(path);
  CHECK(replay.size() == 2);
  CHECK(replay.complete(spec, h1) == recorded[0]);
  CHECK(replay.complete(spec, h2) == recorded[1]);
  CHECK(scripted.served() == 2);
  CHECK(code_of([&] { scripted.complete(spec, h1); }) == ErrorCode::ReplayExhausted);
}

TEST_CASE("registry parsing") {
  const auto registry = ModelRegistry::parse(R"({"models":[
      {"id":"a","display_name":"A","backend":"replay","fixture_dir":"replay/a"},
      {"id":"b","backend":"live","endpoint":"https://x.invalid/v1","model":"gpt",
       "api_key_env":"KEY","params":{"temperature":0.2,"max_tokens":99}}]})",
                                             "/base");
  CHECK(registry.ids() == std::vector<std::string>{"a", "b"});
  CHECK(registry.get("a").fixture_dir == std::filesystem::path("/base/replay/a"));
  CHECK(registry.get("b").temperature == doctest::Approx(0.2));
  CHECK(registry.get("b").max_tokens == 99);
  CHECK(registry.get("b").remote_model == "gpt");
  CHECK(registry.get("b").display_name == "b");
  CHECK(code_of([&] { (void)registry.get("zzz"); }) == ErrorCode::NotFound);
  CHECK(fixture_path_for(registry.get("a"), "s1") == std::filesystem::path("/base/replay/a/s1.ndjson"));
}

TEST_CASE("registry rejects inline keys, duplicates and live models without endpoints") {
  CHECK(code_of([] {
          ModelRegistry::parse(R"({"models":[{"id":"a","backend":"live","endpoint":"http://x","api_key":"sk"}]})", ".");
        }) == ErrorCode::Configuration);
  CHECK(code_of([] {
          ModelRegistry::parse(R"({"models":[{"id":"a"},{"id":"a"}]})", ".");
        }) == ErrorCode::Conflict);
  CHECK(code_of([] { ModelRegistry::parse(R"({"models":[{"id":"a","backend":"live"}]})", "."); }) ==
        ErrorCode::Configuration);
  CHECK(code_of([] { ModelRegistry::parse("[", "."); }) == ErrorCode::Configuration);
}

TEST_CASE("the shipped registry lists six replay models") {
  const auto registry = ModelRegistry::load(test::fixtures_dir() / "models.json");
  CHECK(registry.models().size() == 6);
  for (const auto& m : registry.models()) {
    CHECK(m.backend_kind == BackendKind::Replay);
    CHECK(std::filesystem::exists(fixture_path_for(m, "dh-university-en")));
    CHECK(std::filesystem::exists(fixture_path_for(m, "ecology-secondary-el")));
  }
}

TEST_CASE("live backend sends an OpenAI-style request and measures latency") {
  FakeServer server({{200, completion_body("Hello teacher")}});
  std::vector<std::chrono::milliseconds> sleeps;
  LiveHttpBackend backend(fake_options(sleeps));
  const auto result = backend.complete(live_spec(server.endpoint()),
                                       history_of({{Role::System, "sys"}, {Role::User, "hi"}}));
  CHECK(result.text == "Hello teacher");
  CHECK(result.latency_ms == 250);
  CHECK_FALSE(result.truncated);
  REQUIRE(server.requests_.size() == 1);
  const auto body = nlohmann::json::parse(server.requests_[0]);
  CHECK(body["model"] == "fake-remote");
  CHECK(body["messages"].size() == 2);
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(server.authorization_[0] == "Bearer sk-secret-123");
}

TEST_CASE("live backend flags truncated completions") {
  FakeServer server({{200, completion_body("partial", "length")}});
  std::vector<std::chrono::milliseconds> sleeps;
  LiveHttpBackend backend(fake_options(sleeps));
  CHECK(backend.complete(live_spec(server.endpoint()), history_of({{Role::User, "hi"}})).truncated);
}

TEST_CASE("live backend retries rate limits and server errors with backoff") {
  FakeServer server({{429, "{}"}, {503, "busy"}, {200, completion_body("ok")}});
  std::vector<std::chrono::milliseconds> sleeps;
  auto options = fake_options(sleeps);
  options.initial_backoff = std::chrono::milliseconds(100);
  LiveHttpBackend backend(options);
  CHECK(backend.complete(live_spec(server.endpoint()), history_of({{Role::User, "hi"}})).text == "ok");
  CHECK(server.requests_.size() == 3);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                         std::chrono::milliseconds(200)});
}

TEST_CASE("live backend gives up after the attempt budget") {
  FakeServer server({{429, "{}"}});
  std::vector<std::chrono::milliseconds> sleeps;
  LiveHttpBackend backend(fake_options(sleeps));
  try {
    backend.complete(live_spec(server.endpoint()), history_of({{Role::User, "hi"}}));
    FAIL("expected rate limit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RateLimited);
    CHECK(e.retriable());
  }
  CHECK(server.requests_.size() == 3);
}

TEST_CASE("live backend does not retry auth failures and scrubs the key") {
  FakeServer server({{401, R"({"error":"bad key sk-secret-123"})"}, {500, "key sk-secret-123 leaked"}});
  std::vector<std::chrono::milliseconds> sleeps;
  LiveHttpBackend backend(fake_options(sleeps));
  try {
    backend.complete(live_spec(server.endpoint()), history_of({{Role::User, "hi"}}));
    FAIL("expected auth error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Auth);
    CHECK_FALSE(e.retriable());
  }
  CHECK(server.requests_.size() == 1);
  CHECK(sleeps.empty());
}

TEST_CASE("server error bodies never leak the key") {
  FakeServer server({{500, "key sk-secret-123 leaked"}});
  std::vector<std::chrono::milliseconds> sleeps;
  auto options = fake_options(sleeps);
  options.max_attempts = 1;
  LiveHttpBackend backend(options);
  try {
    backend.complete(live_spec(server.endpoint()), history_of({{Role::User, "hi"}}));
    FAIL("expected network error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Network);
    CHECK(std::string(e.what()).find("sk-secret-123") == std::string::npos);
    CHECK(std::string(e.what()).find("***") != std::string::npos);
  }
}

TEST_CASE("live backend errors without a key, endpoint or reachable server") {
  std::vector<std::chrono::milliseconds> sleeps;
  auto options = fake_options(sleeps);
  options.lookup_env = [](const std::string&) { return std::optional<std::string>(); };
  LiveHttpBackend no_key(options);
  CHECK(code_of([&] { no_key.complete(live_spec("http://127.0.0.1:9/v1"), history_of({{Role::User, "x"}})); }) ==
        ErrorCode::Auth);

  LiveHttpBackend backend(fake_options(sleeps));
  auto spec = live_spec("");
  CHECK(code_of([&] { backend.complete(spec, history_of({{Role::User, "x"}})); }) == ErrorCode::Configuration);
  CHECK(code_of([&] { backend.complete(live_spec("127.0.0.1/v1"), history_of({{Role::User, "x"}})); }) ==
        ErrorCode::Configuration);

  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  CHECK(code_of([&] {
          backend.complete(live_spec("http://127.0.0.1:" + std::to_string(port) + "/v1"),
                           history_of({{Role::User, "x"}}));
        }) == ErrorCode::Network);
}

TEST_CASE("malformed completion bodies are backend errors") {
  FakeServer server({{200, R"({"choices":[]})"}});
  std::vector<std::chrono::milliseconds> sleeps;
  LiveHttpBackend backend(fake_options(sleeps));
  CHECK(code_of([&] { backend.complete(live_spec(server.endpoint()), history_of({{Role::User, "x"}})); }) ==
        ErrorCode::Backend);
}
