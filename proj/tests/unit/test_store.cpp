#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <random>

#include "lsa/dialog/protocol.hpp"
#include "lsa/error.hpp"
#include "lsa/store/event.hpp"
#include "lsa/store/session_store.hpp"
#include "test_support.hpp"

using namespace lsa;
using namespace lsa::store;
using lsa::dialog::Phase;

namespace {

TranscriptEvent make_event(std::uint64_t seq, EventKind kind, std::string content,
                           PromptTarget target = PromptTarget::None,
                           std::optional<long long> latency = std::nullopt) {
  TranscriptEvent e;
  e.seq = seq;
  e.timestamp = std::chrono::system_clock::time_point(std::chrono::milliseconds(1'700'000'000'000 + seq));
  e.kind = kind;
  e.target = target;
  e.content = std::move(content);
  e.latency_ms = latency;
  return e;
}

/// Positioning exchange followed by questions 1..3 answered.
std::vector<TranscriptEvent> opening_events() {
  std::vector<TranscriptEvent> events;
  std::uint64_t seq = 0;
  events.push_back(make_event(++seq, EventKind::AssistantPrompt, "positioning", PromptTarget::Model));
  events.push_back(make_event(++seq, EventKind::ModelReply, "Good practices...", PromptTarget::None, 900));
  for (int q = 1; q <= 3; ++q) {
    events.push_back(make_event(++seq, EventKind::AssistantPrompt, "Q" + std::to_string(q), PromptTarget::User));
    events.push_back(make_event(++seq, EventKind::UserInput, "answer " + std::to_string(q)));
  }
  events.push_back(make_event(++seq, EventKind::Warning, "note"));
  return events;
}

SessionMeta meta_for(const std::string& id) {
  SessionMeta meta;
  meta.session_id = id;
  meta.scenario_id = "scn";
  meta.model_id = "m";
  meta.created_at = "2024-01-01T00:00:00.000Z";
  meta.config.audience = "teachers";
  return meta;
}

std::string populate(SessionStore& store, const std::string& id) {
  store.create_session(meta_for(id));
  auto writer = store.open_writer(id);
  auto state = dialog::new_session(id, meta_for(id).config, dialog::Language::English);
  for (const auto& e : opening_events()) {
    writer.append(e);
    state = apply_event(state, e);
  }
  writer.save_state(state);
  return test::slurp(store.session_dir(id) / "events.ndjson");
}

std::uint64_t checksum_offset(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ChecksumError& e) {
    CHECK(e.code() == ErrorCode::Checksum);
    return e.offset();
  }
  FAIL("expected a checksum error");
  return 0;
}

}  // namespace

TEST_CASE("event encoding has a fixed field order and round-trips") {
  const auto e = make_event(3, EventKind::ModelReply, "Καλημέρα \"x\"\n", PromptTarget::None, 1234);
  const auto line = encode_event(e);
  CHECK(line.rfind(R"({"seq":3,"ts":")", 0) == 0);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(decode_event(line) == e);
  const auto bare = encode_event(e, false);
  CHECK(bare.find("\"ts\"") == std::string::npos);
  const auto prompt = make_event(1, EventKind::AssistantPrompt, "p", PromptTarget::User);
  CHECK(encode_event(prompt).find(R"("target":"user")") != std::string::npos);
  CHECK(decode_event(encode_event(prompt)) == prompt);
  for (auto kind : {EventKind::AssistantPrompt, EventKind::ModelReply, EventKind::UserInput,
                    EventKind::Draft, EventKind::FinalPlan, EventKind::Warning}) {
    CHECK(parse_event_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(decode_event("{\"seq\":1}"), Error);
}

TEST_CASE("folding the opening events reaches question 4") {
  const auto initial = dialog::new_session("s", {}, dialog::Language::English);
  const auto events = opening_events();
  const auto state = fold_events(initial, events);
  CHECK(state.phase == Phase::ask_question(4));
  CHECK(state.answers.at(2) == "answer 2");
  const auto conversation = model_conversation(events);
  REQUIRE(conversation.size() == 2);
  CHECK_FALSE(conversation[0].from_model);
  CHECK(conversation[1].from_model);
}

TEST_CASE("create, append, reload") {
  test::TempDir dir;
  SessionStore store(dir.path());
  const auto bytes = populate(store, "abc");
  CHECK(store.exists("abc"));
  CHECK(store.list_sessions() == std::vector<std::string>{"abc"});
  CHECK(store.read_meta("abc") == meta_for("abc"));
  const auto loaded = store.load_session("abc");
  CHECK(loaded.events == opening_events());
  CHECK(loaded.state.phase == Phase::ask_question(4));
  CHECK(loaded.config.goal == "answer 3");
  CHECK(std::count(bytes.begin(), bytes.end(), '\n') == static_cast<long>(opening_events().size()));
  CHECK(bytes.rfind(R"({"crc":")", 0) == 0);
}

TEST_CASE("session ids") {
  test::TempDir dir;
  SessionStore store(dir.path());
  const auto id = new_session_id();
  CHECK(id.size() == 32);
  CHECK(id.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(new_session_id() != id);
  auto meta = meta_for("");
  CHECK(store.create_session(meta).session_id.size() == 32);
  CHECK_THROWS_AS(store.create_session(meta_for("../evil")), Error);
  store.create_session(meta_for("dup"));
  try {
    store.create_session(meta_for("dup"));
    FAIL("duplicate accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Conflict);
  }
  CHECK_THROWS_AS(store.read_events("nope"), Error);
  CHECK_THROWS_AS(store.open_writer("nope"), Error);
}

TEST_CASE("appends must be contiguous") {
  test::TempDir dir;
  SessionStore store(dir.path());
  store.create_session(meta_for("s"));
  auto writer = store.open_writer("s");
  writer.append(make_event(1, EventKind::Warning, "a"));
  CHECK_THROWS_AS(writer.append(make_event(3, EventKind::Warning, "c")), Error);
  CHECK_THROWS_AS(writer.append(make_event(1, EventKind::Warning, "a")), Error);
  CHECK(writer.last_seq() == 1);
}

TEST_CASE("a second writer is refused while the first holds the lock") {
  test::TempDir dir;
  SessionStore store(dir.path());
  store.create_session(meta_for("s"));
  {
    auto writer = store.open_writer("s");
    try {
      store.open_writer("s");
      FAIL("second writer accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Locked);
    }

    const pid_t pid = fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
      int code = 3;
      try {
        SessionStore other(dir.path());
        other.open_writer("s");
        code = 0;
      } catch (const Error& e) {
        code = e.code() == ErrorCode::Locked ? 1 : 2;
      }
      _exit(code);
    }
    int status = 0;
    waitpid(pid, &status, 0);
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 1);
  }
  CHECK_NOTHROW(store.open_writer("s"));
}

TEST_CASE("a writer killed mid-session leaves a readable log and releases the lock") {
  test::TempDir dir;
  SessionStore store(dir.path());
  store.create_session(meta_for("crash"));
  const auto events = opening_events();
  const pid_t pid = fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    SessionStore child(dir.path());
    auto writer = child.open_writer("crash");
    for (std::size_t i = 0; i < 5; ++i) writer.append(events[i]);
    // Simulated crash: no destructors, no state cache update.
    kill(getpid(), SIGKILL);
    _exit(9);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  REQUIRE(WIFSIGNALED(status));

  auto writer = store.open_writer("crash");
  CHECK(writer.last_seq() == 5);
  const auto loaded = store.load_session("crash");
  CHECK(loaded.events.size() == 5);
  CHECK(loaded.state == fold_events(dialog::new_session("crash", {}, dialog::Language::English),
                                    std::span(events).first(5)));
  writer.append(events[5]);
  CHECK(store.read_events("crash").size() == 6);
}

TEST_CASE("truncation at any offset is detected at the first damaged record") {
  test::TempDir dir;
  SessionStore store(dir.path());
  const auto bytes = populate(store, "t");
  const auto path = store.session_dir("t") / "events.ndjson";
  std::mt19937_64 rng(7);
  std::vector<std::size_t> cuts{0, 1, bytes.size() - 1};
  for (int i = 0; i < 40; ++i) cuts.push_back(rng() % bytes.size());
  for (const auto cut : cuts) {
    test::spit(path, bytes.substr(0, cut));
    // Oracle: a cut on a line boundary loses whole records, reported at the
    // end of the file; otherwise the partial line's start is reported.
    const auto line_start = cut == 0 ? 0 : bytes.rfind('\n', cut - 1);
    const std::size_t expected = cut == 0 ? 0 : (line_start == std::string::npos ? 0 : line_start + 1);
    CAPTURE(cut);
    CHECK(checksum_offset([&] { store.read_events("t"); }) == expected);
  }
}

TEST_CASE("a flipped byte fails the record checksum") {
  test::TempDir dir;
  SessionStore store(dir.path());
  auto bytes = populate(store, "f");
  const auto second_line = bytes.find('\n') + 1;
  const auto target = bytes.find("Good practices", second_line);
  REQUIRE(target != std::string::npos);
  bytes[target] = 'g';
  test::spit(store.session_dir("f") / "events.ndjson", bytes);
  CHECK(checksum_offset([&] { store.read_events("f"); }) == second_line);
}

TEST_CASE("sequence gaps are integrity errors") {
  test::TempDir dir;
  SessionStore store(dir.path());
  const auto bytes = populate(store, "g");
  const auto first_end = bytes.find('\n') + 1;
  const auto second_end = bytes.find('\n', first_end) + 1;
  test::spit(store.session_dir("g") / "events.ndjson",
             bytes.substr(0, first_end) + bytes.substr(second_end));
  try {
    store.read_events("g");
    FAIL("gap accepted");
  } catch (const ChecksumError&) {
    FAIL("gap reported as checksum error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Integrity);
  }
}

TEST_CASE("a damaged state cache is ignored") {
  test::TempDir dir;
  SessionStore store(dir.path());
  populate(store, "c");
  test::spit(store.session_dir("c") / "state.json", "{not json");
  CHECK(store.load_session("c").events.size() == opening_events().size());
}
