#include "lsa/service/batch.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "lsa/error.hpp"
#include "lsa/service/runner.hpp"
#include "lsa/service/scenario.hpp"
#include "util/fs.hpp"

namespace lsa::service {

namespace {

std::string cell_json(const CellResult& cell, std::optional<double> latency) {
  nlohmann::ordered_json j;
  j["scenario_id"] = cell.scenario_id;
  j["model_id"] = cell.model_id;
  j["language"] = cell.language;
  j["events"] = cell.events;
  j["mean_latency_ms"] = latency ? nlohmann::ordered_json(*latency) : nullptr;
  j["warnings"] = cell.warnings;
  return j.dump(2) + "\n";
}

void run_cell(const BatchJob& job, const backends::ModelSpec& spec, const ScenarioFixture& scenario,
              store::SessionStore& store, const BackendFactory& factory, const WallClock& clock,
              CellResult& cell) {
  auto backend = factory ? factory(spec, scenario.scenario_id)
                         : backends::make_backend(spec, scenario.scenario_id);
  store::SessionMeta meta;
  meta.scenario_id = scenario.scenario_id;
  meta.model_id = spec.id;
  meta.config.language = scenario.language;
  auto session = Session::create(store, meta, *backend, spec, {clock, nullptr});
  cell.session_id = session.meta().session_id;
  auto result = run_headless(session, scenario.inputs);
  cell.warnings = std::move(result.warnings);
  cell.events = session.events().size();

  const auto report =
      linguistics::analyze(model_replies(session.events()), scenario.language, job.analysis);
  for (const auto& w : report.warnings) cell.warnings.push_back("linguistics: " + w);

  const auto dir = job.output_dir / "cells" / (scenario.scenario_id + "__" + spec.id);
  std::filesystem::create_directories(dir);
  util::write_file_atomic(dir / "transcript.ndjson", export_transcript(session.events()));
  util::write_file_atomic(dir / "final_plan.md", result.final_plan);
  util::write_file_atomic(dir / "linguistics.json", linguistics::report_to_json(report));
  util::write_file_atomic(dir / "cell.json", cell_json(cell, mean_latency_ms(session.events())));
}

}  // namespace

std::size_t BatchSummary::succeeded() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; }));
}

std::size_t BatchSummary::failed() const { return cells.size() - succeeded(); }

int BatchSummary::exit_code() const { return failed() == 0 ? 0 : 2; }

BatchSummary run_batch(const BatchJob& job, const backends::ModelRegistry& registry,
                       const BackendFactory& factory, WallClock clock) {
  if (job.scenario_ids.empty() || job.model_ids.empty()) {
    throw Error(ErrorCode::Configuration, "batch needs at least one scenario and one model");
  }
  if (job.concurrency_limit < 1) {
    throw Error(ErrorCode::Configuration, "concurrency limit must be at least 1");
  }
  std::vector<ScenarioFixture> scenarios;
  for (const auto& id : job.scenario_ids) scenarios.push_back(find_scenario(job.scenario_dir, id));
  std::vector<backends::ModelSpec> specs;
  for (const auto& id : job.model_ids) {
    const auto& spec = registry.get(id);
    if (job.backend_kind && spec.backend_kind != *job.backend_kind) {
      throw Error(ErrorCode::Configuration,
                  fmt::format("model {} uses the {} backend, batch requested {}", id,
                              backends::to_string(spec.backend_kind),
                              backends::to_string(*job.backend_kind)));
    }
    specs.push_back(spec);
  }

  std::filesystem::create_directories(job.output_dir);
  store::SessionStore store(job.store_dir.empty() ? job.output_dir / "store" : job.store_dir);
  std::mutex clock_mutex;
  WallClock shared_clock = [&clock, &clock_mutex] {
    std::lock_guard lock(clock_mutex);
    return clock();
  };

  BatchSummary summary;
  for (const auto& scenario : scenarios) {
    for (const auto& spec : specs) {
      CellResult cell;
      cell.scenario_id = scenario.scenario_id;
      cell.model_id = spec.id;
      cell.language = std::string(dialog::language_code(scenario.language));
      summary.cells.push_back(std::move(cell));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const auto index = next.fetch_add(1);
      if (index >= summary.cells.size()) return;
      auto& cell = summary.cells[index];
      const auto& scenario = scenarios[index / specs.size()];
      const auto& spec = specs[index % specs.size()];
      try {
        run_cell(job, spec, scenario, store, factory, shared_clock, cell);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(job.concurrency_limit),
                                             summary.cells.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  util::write_file_atomic(job.output_dir / "summary.json", summary_to_json(summary));
  return summary;
}

std::string summary_to_json(const BatchSummary& summary) {
  nlohmann::ordered_json j;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : summary.cells) {
    nlohmann::ordered_json cell;
    cell["scenario_id"] = c.scenario_id;
    cell["model_id"] = c.model_id;
    cell["language"] = c.language;
    cell["status"] = c.ok ? "ok" : "failed";
    cell["events"] = c.events;
    if (!c.ok) cell["error"] = c.error;
    cell["warnings"] = c.warnings;
    j["cells"].push_back(std::move(cell));
  }
  j["succeeded"] = summary.succeeded();
  j["failed"] = summary.failed();
  return j.dump(2) + "\n";
}

}  // namespace lsa::service
