#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "lsa/backends/registry.hpp"
#include "lsa/backends/replay.hpp"
#include "lsa/linguistics/analyze.hpp"
#include "lsa/linguistics/dtm.hpp"
#include "lsa/linguistics/lda.hpp"
#include "lsa/linguistics/tokenizer.hpp"
#include "lsa/rubric/scores.hpp"
#include "lsa/service/runner.hpp"
#include "lsa/service/scenario.hpp"
#include "lsa/store/session_store.hpp"

namespace {

const std::filesystem::path kFixtures = LSA_FIXTURES_DIR;

std::vector<std::string> replies_of(const std::string& model, const std::string& scenario) {
  std::vector<std::string> out;
  for (const auto& r : lsa::backends::read_fixture(kFixtures / "replay" / model / (scenario + ".ndjson"))) {
    out.push_back(r.response_text);
  }
  return out;
}

void BM_Tokenize(benchmark::State& state) {
  const auto docs = replies_of("chatgpt-4", "dh-university-en");
  std::size_t bytes = 0;
  for (const auto& d : docs) bytes += d.size();
  for (auto _ : state) {
    for (const auto& d : docs) benchmark::DoNotOptimize(lsa::linguistics::tokenize(d));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Tokenize);

void BM_LdaFit(benchmark::State& state) {
  const auto docs = replies_of("llama2-70b", "dh-university-en");
  std::vector<std::vector<lsa::linguistics::Token>> tokens;
  for (const auto& d : docs) tokens.push_back(lsa::linguistics::tokenize(d));
  const auto dtm = lsa::linguistics::build_dtm(
      tokens, lsa::linguistics::builtin_stopwords(lsa::dialog::Language::English), 3);
  lsa::linguistics::LdaParams params;
  params.iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lsa::linguistics::lda_fit(dtm, params));
  state.counters["tokens"] = static_cast<double>(dtm.total_tokens());
}
BENCHMARK(BM_LdaFit)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ReplaySession(benchmark::State& state) {
  const auto registry = lsa::backends::ModelRegistry::load(kFixtures / "models.json");
  const auto& spec = registry.get("chatgpt-4");
  const auto scenario = lsa::service::find_scenario(kFixtures / "scenarios", "dh-university-en");
  const auto root = std::filesystem::temp_directory_path() / "lsa-bench-store";
  std::filesystem::remove_all(root);
  lsa::store::SessionStore store(root);
  auto backend = lsa::backends::make_backend(spec, scenario.scenario_id);
  for (auto _ : state) {
    lsa::store::SessionMeta meta;
    meta.scenario_id = scenario.scenario_id;
    auto session = lsa::service::Session::create(store, meta, *backend, spec);
    benchmark::DoNotOptimize(lsa::service::run_headless(session, scenario.inputs));
  }
  std::filesystem::remove_all(root);
}
BENCHMARK(BM_ReplaySession)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<lsa::rubric::RubricScore> scores;
  const char* criteria[] = {"relevance", "accuracy", "creativity", "coherence"};
  for (int i = 0; i < state.range(0); ++i) {
    scores.push_back({"m" + std::to_string(i % 6), "s" + std::to_string(i % 10), criteria[i % 4],
                      "r" + std::to_string(i), 1 + static_cast<int>(rng() % 5), ""});
  }
  for (auto _ : state) benchmark::DoNotOptimize(lsa::rubric::aggregate(scores));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Aggregate)->Arg(500)->Arg(50000);

}  // namespace

BENCHMARK_MAIN();
