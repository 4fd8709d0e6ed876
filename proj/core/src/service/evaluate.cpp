#include "lsa/service/evaluate.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "lsa/error.hpp"
#include "lsa/linguistics/analyze.hpp"
#include "lsa/service/scenario.hpp"
#include "util/fs.hpp"

namespace lsa::service {

namespace {

std::vector<std::filesystem::path> cell_dirs(const std::filesystem::path& batch_dir) {
  const auto cells = batch_dir / "cells";
  if (!std::filesystem::is_directory(cells)) {
    throw Error(ErrorCode::NotFound, "no cells directory in " + batch_dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(cells)) {
    if (entry.is_directory()) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<rubric::LinguisticEntry> collect_linguistics(
    const std::vector<std::filesystem::path>& batch_dirs) {
  std::vector<rubric::LinguisticEntry> entries;
  for (const auto& batch_dir : batch_dirs) {
    for (const auto& dir : cell_dirs(batch_dir)) {
      if (!std::filesystem::exists(dir / "cell.json") ||
          !std::filesystem::exists(dir / "linguistics.json")) {
        continue;
      }
      nlohmann::json cell;
      try {
        cell = nlohmann::json::parse(util::read_file(dir / "cell.json"));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidInput,
                    "malformed " + (dir / "cell.json").string() + ": " + e.what());
      }
      const auto report = linguistics::report_from_json(util::read_file(dir / "linguistics.json"));
      rubric::LinguisticEntry entry;
      entry.model_id = cell.at("model_id").get<std::string>();
      entry.scenario_id = cell.at("scenario_id").get<std::string>();
      entry.language = dialog::parse_language(report.language);
      entry.token_count = static_cast<long long>(report.token_count);
      entry.main_topic_count = report.main_topic_count;
      if (cell.contains("mean_latency_ms") && cell["mean_latency_ms"].is_number()) {
        entry.mean_latency_ms = cell["mean_latency_ms"].get<double>();
      }
      entries.push_back(std::move(entry));
    }
  }
  return entries;
}

rubric::ReportDocument evaluate(const EvaluationRequest& request,
                                const backends::ModelRegistry& registry) {
  rubric::ReportInput input;
  for (const auto& spec : registry.models()) {
    input.models.push_back({spec.id, spec.display_name.empty() ? spec.id : spec.display_name});
  }
  input.linguistics = collect_linguistics(request.batch_dirs);
  for (const auto& e : input.linguistics) input.scenario_languages[e.scenario_id] = e.language;
  if (request.scenario_dir) {
    for (const auto& s : load_scenarios(*request.scenario_dir)) {
      input.scenario_languages.emplace(s.scenario_id, s.language);
    }
  }
  if (request.scores_csv) {
    const auto ids = registry.ids();
    input.scores = rubric::ScoreBook::from_csv(util::read_file(*request.scores_csv),
                                               {ids.begin(), ids.end()})
                       .scores();
  }
  return rubric::build_report(input);
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "md" || text == "markdown") return ReportFormat::Markdown;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "all") return ReportFormat::All;
  throw Error(ErrorCode::Configuration, "unknown report format: " + std::string(text));
}

std::vector<std::filesystem::path> write_report(const rubric::ReportDocument& report,
                                                const std::filesystem::path& out_dir,
                                                ReportFormat format) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& path, const std::string& content) {
    util::write_file_atomic(path, content);
    written.push_back(path);
  };
  if (format != ReportFormat::Csv) write(out_dir / "report.md", rubric::render_markdown(report));
  if (format != ReportFormat::Markdown) {
    for (const auto& table : report.tables) {
      write(out_dir / (table.slug() + ".csv"), rubric::render_table_csv(table));
    }
  }
  write(out_dir / "report.json", rubric::render_json(report));
  return written;
}

}  // namespace lsa::service
