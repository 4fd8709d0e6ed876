#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsa/backends/registry.hpp"
#include "lsa/rubric/report.hpp"

namespace lsa::service {

/// Linguistic entries from the cells of one or more batch output
/// directories (cell.json + linguistics.json of successful cells).
std::vector<rubric::LinguisticEntry> collect_linguistics(
    const std::vector<std::filesystem::path>& batch_dirs);

struct EvaluationRequest {
  std::vector<std::filesystem::path> batch_dirs;
  std::optional<std::filesystem::path> scores_csv;
  /// Scenario fixtures; they supply the language of scored scenarios.
  std::optional<std::filesystem::path> scenario_dir;
};

rubric::ReportDocument evaluate(const EvaluationRequest& request,
                                const backends::ModelRegistry& registry);

enum class ReportFormat { Markdown, Csv, All };

ReportFormat parse_report_format(std::string_view text);

/// Writes report.md, <slug>.csv per table and report.json into `out_dir`
/// (subject to `format`, report.json always). Returns the written paths.
std::vector<std::filesystem::path> write_report(const rubric::ReportDocument& report,
                                                const std::filesystem::path& out_dir,
                                                ReportFormat format = ReportFormat::All);

}  // namespace lsa::service
