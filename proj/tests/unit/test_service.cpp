#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "lsa/backends/registry.hpp"
#include "lsa/backends/replay.hpp"
#include "lsa/dialog/protocol.hpp"
#include "lsa/error.hpp"
#include "lsa/linguistics/analyze.hpp"
#include "lsa/service/batch.hpp"
#include "lsa/service/evaluate.hpp"
#include "lsa/service/runner.hpp"
#include "lsa/service/scenario.hpp"
#include "lsa/store/event.hpp"
#include "lsa/store/session_store.hpp"
#include "test_support.hpp"

using namespace lsa;
using namespace lsa::service;

namespace {

struct Fixture {
  backends::ModelRegistry registry = backends::ModelRegistry::load(test::fixtures_dir() / "models.json");
  ScenarioFixture en = find_scenario(test::fixtures_dir() / "scenarios", "dh-university-en");
  ScenarioFixture el = find_scenario(test::fixtures_dir() / "scenarios", "ecology-secondary-el");
};

store::SessionMeta meta_for(const ScenarioFixture& scenario, const std::string& id) {
  store::SessionMeta meta;
  meta.session_id = id;
  meta.scenario_id = scenario.scenario_id;
  meta.config.language = scenario.language;
  return meta;
}

class FailingBackend final : public backends::ChatBackend {
 public:
  backends::CompletionResult complete(const backends::ModelSpec&, const backends::ChatHistory&) override {
    throw Error(ErrorCode::Network, "connection refused");
  }
};

}  // namespace

TEST_CASE("scenario fixtures load and validate") {
  Fixture f;
  CHECK(f.en.language == dialog::Language::English);
  CHECK(f.el.language == dialog::Language::Greek);
  CHECK(f.en.inputs.size() == 16);
  CHECK(load_scenarios(test::fixtures_dir() / "scenarios").size() == 2);
  CHECK_THROWS_AS(find_scenario(test::fixtures_dir() / "scenarios", "missing"), Error);
  CHECK_THROWS_AS(validate_id("a/b", "id"), Error);
  CHECK_THROWS_AS(parse_scenario(R"({"scenario_id":"x"})"), Error);
}

TEST_CASE("golden session is deterministic") {
  test::TempDir a, b;
  const auto first = test::run_golden_session(a.path());
  CHECK(first == test::run_golden_session(b.path()));
  if (std::filesystem::exists(test::golden_events_path())) {
    CHECK(first == test::slurp(test::golden_events_path()));
  }
}

TEST_CASE("golden transcript analysis matches the recorded report") {
  const auto golden_dir = test::fixtures_dir() / "golden";
  const auto expected = linguistics::report_from_json(
      test::slurp(golden_dir / "dh-university-en.chatgpt-4.linguistics.json"));
  test::TempDir dir;
  test::run_golden_session(dir.path());
  const auto events = store::SessionStore(dir.path()).read_events("golden-dh");
  const auto report = linguistics::analyze(model_replies(events), dialog::Language::English);
  CHECK(report.token_count == expected.token_count);
  CHECK(report.word_tokens == expected.word_tokens);
  CHECK(report.main_topic_count == expected.main_topic_count);
  CHECK(report.top_terms_per_topic == expected.top_terms_per_topic);
  REQUIRE(report.topic_prevalences.size() == expected.topic_prevalences.size());
  for (std::size_t k = 0; k < report.topic_prevalences.size(); ++k) {
    CHECK(std::abs(report.topic_prevalences[k] - expected.topic_prevalences[k]) < 1e-12);
  }
}

TEST_CASE("a headless session replays to a final plan with a consistent log") {
  Fixture f;
  test::TempDir dir;
  store::SessionStore store(dir.path());
  const auto& spec = f.registry.get("llama2-13b");
  auto backend = backends::make_backend(spec, f.el.scenario_id);
  auto session = Session::create(store, meta_for(f.el, "el1"), *backend, spec, {test::golden_clock(), nullptr});
  const auto result = run_headless(session, f.el.inputs);
  CHECK(session.done());
  CHECK_FALSE(result.final_plan.empty());
  CHECK(result.final_plan == model_replies(session.events()).back());
  CHECK(session.meta().model_id == "llama2-13b");

  const auto loaded = store.load_session("el1");
  CHECK(loaded.events == session.events());
  CHECK(loaded.state == session.state());
  CHECK(loaded.state.phase == dialog::Phase::done());
  CHECK(mean_latency_ms(loaded.events).has_value());
  const auto history = history_from_events(loaded.events);
  CHECK(backends::assistant_turns(history) == model_replies(loaded.events).size());
}

TEST_CASE("submitting step by step matches the headless run") {
  Fixture f;
  test::TempDir a, b;
  const auto& spec = f.registry.get("chatgpt-35");
  store::SessionStore store_a(a.path()), store_b(b.path());
  auto backend_a = backends::make_backend(spec, f.en.scenario_id);
  auto backend_b = backends::make_backend(spec, f.en.scenario_id);
  auto headless = Session::create(store_a, meta_for(f.en, "s"), *backend_a, spec, {test::golden_clock(), nullptr});
  run_headless(headless, f.en.inputs);

  auto stepped = Session::create(store_b, meta_for(f.en, "s"), *backend_b, spec, {test::golden_clock(), nullptr});
  auto action = stepped.advance();
  std::size_t next = 0;
  while (!stepped.done()) {
    REQUIRE(stepped.awaiting_user());
    REQUIRE(std::holds_alternative<dialog::AskUser>(action));
    CHECK(stepped.pending() == action);
    action = stepped.submit(f.en.inputs.at(next++)).action;
  }
  CHECK(test::slurp(a / "s/events.ndjson") == test::slurp(b / "s/events.ndjson"));
}

TEST_CASE("a session resumed from the store finishes identically") {
  Fixture f;
  test::TempDir straight, resumed;
  const auto& spec = f.registry.get("chatgpt-4");
  {
    store::SessionStore store(straight.path());
    auto backend = backends::make_backend(spec, f.en.scenario_id);
    auto s = Session::create(store, meta_for(f.en, "r"), *backend, spec);
    run_headless(s, f.en.inputs);
  }
  store::SessionStore store(resumed.path());
  auto backend = backends::make_backend(spec, f.en.scenario_id);
  {
    auto s = Session::create(store, meta_for(f.en, "r"), *backend, spec);
    s.advance();
    for (std::size_t i = 0; i < 9; ++i) s.submit(f.en.inputs[i]);
    try {
      Session::open(store, "r", *backend, spec);
      FAIL("second writer accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Locked);
    }
  }
  auto s = Session::open(store, "r", *backend, spec);
  run_headless(s, std::vector<std::string>(f.en.inputs.begin() + 9, f.en.inputs.end()));
  const auto expected = store::SessionStore(straight.path()).read_events("r");
  CHECK(export_transcript(s.events()) == export_transcript(expected));
}

TEST_CASE("re-asks and protocol misuse") {
  Fixture f;
  test::TempDir dir;
  store::SessionStore store(dir.path());
  const auto& spec = f.registry.get("bard");
  auto backend = backends::make_backend(spec, f.en.scenario_id);
  auto s = Session::create(store, meta_for(f.en, "x"), *backend, spec);
  s.advance();
  const auto blank = s.submit("   ");
  CHECK(blank.reask);
  CHECK(s.state().phase == dialog::Phase::await_answer(1));
  CHECK(s.events().back().kind == store::EventKind::Warning);
  for (int i = 0; i < 6; ++i) s.submit(f.en.inputs[i]);
  const auto bad = s.submit("perhaps");
  CHECK(bad.reask);
  CHECK(std::get<dialog::AskUser>(bad.action).keywords == dialog::KeywordSet::YesNo);
  CHECK_THROWS_AS(run_headless(s, {"NO"}), Error);
}

TEST_CASE("model failures surface and the session can be retried") {
  Fixture f;
  test::TempDir dir;
  store::SessionStore store(dir.path());
  const auto& spec = f.registry.get("chatgpt-4");
  FailingBackend failing;
  {
    auto s = Session::create(store, meta_for(f.en, "fail"), failing, spec);
    try {
      s.advance();
      FAIL("expected a network error");
    } catch (const Error& e) {
      CHECK(e.retriable());
    }
    CHECK_FALSE(s.awaiting_user());
    CHECK_FALSE(s.pending());
  }
  auto backend = backends::make_backend(spec, f.en.scenario_id);
  auto s = Session::open(store, "fail", *backend, spec);
  const auto result = run_headless(s, f.en.inputs);
  CHECK(result.final_plan == model_replies(s.events()).back());
}

TEST_CASE("batch isolates failing cells and writes artefacts") {
  Fixture f;
  test::TempDir out;
  BatchJob job;
  job.scenario_ids = {"dh-university-en", "ecology-secondary-el"};
  job.model_ids = {"chatgpt-4", "llama2-70b"};
  job.concurrency_limit = 2;
  job.output_dir = out / "batch";
  job.store_dir = out / "store";
  job.scenario_dir = test::fixtures_dir() / "scenarios";
  job.analysis.lda.iterations = 60;
  job.analysis.lda.burn_in = 10;
  job.analysis.lda.check_every = 10;
  const BackendFactory factory = [](const backends::ModelSpec& spec, const std::string& scenario)
      -> std::unique_ptr<backends::ChatBackend> {
    if (spec.id == "llama2-70b" && scenario == "ecology-secondary-el") return std::make_unique<FailingBackend>();
    return backends::make_backend(spec, scenario);
  };
  const auto summary = run_batch(job, f.registry, factory, test::golden_clock());
  CHECK(summary.cells.size() == 4);
  CHECK(summary.succeeded() == 3);
  CHECK(summary.failed() == 1);
  CHECK(summary.exit_code() == 2);
  for (const auto& cell : summary.cells) {
    const auto dir = job.output_dir / "cells" / (cell.scenario_id + "__" + cell.model_id);
    if (cell.ok) {
      CHECK(std::filesystem::exists(dir / "transcript.ndjson"));
      CHECK(std::filesystem::exists(dir / "final_plan.md"));
      CHECK(std::filesystem::exists(dir / "linguistics.json"));
      CHECK(std::filesystem::exists(dir / "cell.json"));
    } else {
      CHECK(cell.model_id == "llama2-70b");
      CHECK(cell.error.find("connection refused") != std::string::npos);
    }
  }
  const auto summary_json = nlohmann::json::parse(test::slurp(job.output_dir / "summary.json"));
  CHECK(summary_json["failed"] == 1);

  job.model_ids = {"nope"};
  CHECK_THROWS_AS(run_batch(job, f.registry), Error);
}

TEST_CASE("evaluation without scores still reports linguistics") {
  Fixture f;
  test::TempDir out;
  BatchJob job;
  job.scenario_ids = {"ecology-secondary-el"};
  job.model_ids = {"chatgpt-35", "bard"};
  job.output_dir = out / "batch";
  job.store_dir = out / "store";
  job.scenario_dir = test::fixtures_dir() / "scenarios";
  job.analysis.lda.iterations = 40;
  job.analysis.lda.burn_in = 10;
  job.analysis.lda.check_every = 10;
  REQUIRE(run_batch(job, f.registry).exit_code() == 0);

  const auto entries = collect_linguistics({job.output_dir});
  CHECK(entries.size() == 2);
  const auto doc = evaluate({{job.output_dir}, std::nullopt, std::nullopt}, f.registry);
  REQUIRE(doc.tables.size() == 1);
  CHECK(doc.tables[0].slug() == "linguistic_el");
  CHECK(doc.tables[0].columns.size() == 6);
  CHECK(std::find(doc.warnings.begin(), doc.warnings.end(), "no rubric scores supplied") != doc.warnings.end());

  const auto files = write_report(doc, out / "report", ReportFormat::All);
  CHECK(std::filesystem::exists(out / "report/report.md"));
  CHECK(std::filesystem::exists(out / "report/report.json"));
  CHECK(std::filesystem::exists(out / "report/linguistic_el.csv"));
  CHECK(files.size() == 3);
  CHECK(parse_report_format("md") == ReportFormat::Markdown);
  CHECK_THROWS_AS(parse_report_format("pdf"), Error);
}
