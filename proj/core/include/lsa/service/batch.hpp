#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lsa/backends/registry.hpp"
#include "lsa/clock.hpp"
#include "lsa/linguistics/analyze.hpp"

namespace lsa::service {

struct BatchJob {
  std::vector<std::string> scenario_ids;
  std::vector<std::string> model_ids;
  /// When set, every model must use this backend kind.
  std::optional<backends::BackendKind> backend_kind;
  int concurrency_limit = 1;
  std::filesystem::path output_dir;
  std::filesystem::path scenario_dir;
  /// Session store; defaults to <output_dir>/store.
  std::filesystem::path store_dir;
  linguistics::AnalysisParams analysis;
};

struct CellResult {
  std::string scenario_id;
  std::string model_id;
  std::string language;
  bool ok = false;
  std::string session_id;
  std::string error;
  std::size_t events = 0;
  std::vector<std::string> warnings;
};

struct BatchSummary {
  std::vector<CellResult> cells;
  std::size_t succeeded() const;
  std::size_t failed() const;
  /// 0 when every cell succeeded, 2 otherwise.
  int exit_code() const;
};

/// Overrides backend construction (tests inject failing backends).
using BackendFactory = std::function<std::unique_ptr<backends::ChatBackend>(
    const backends::ModelSpec&, const std::string& scenario_id)>;

/// Runs every (scenario, model) cell with at most concurrency_limit
/// sessions in flight. Each successful cell writes
///   <out>/cells/<scenario>__<model>/{cell.json, transcript.ndjson,
///                                    final_plan.md, linguistics.json}
/// and the run ends with <out>/summary.json. A failing cell is recorded
/// and never touches another cell's directory.
BatchSummary run_batch(const BatchJob& job, const backends::ModelRegistry& registry,
                       const BackendFactory& factory = {}, WallClock clock = system_wall_clock());

std::string summary_to_json(const BatchSummary& summary);

}  // namespace lsa::service
