#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsa/dialog/types.hpp"
#include "lsa/rubric/criteria.hpp"
#include "lsa/rubric/scores.hpp"

namespace lsa::rubric {

struct ModelColumn {
  std::string id;
  std::string display_name;
};

/// Linguistic figures for one completed session.
struct LinguisticEntry {
  std::string model_id;
  std::string scenario_id;
  dialog::Language language = dialog::Language::English;
  long long token_count = 0;
  int main_topic_count = 0;
  /// Mean model-reply latency, kept as evidence next to Response Time.
  std::optional<double> mean_latency_ms;
};

struct ReportInput {
  /// Column order.
  std::vector<ModelColumn> models;
  /// Language of every scenario that appears in scores or entries.
  std::map<std::string, dialog::Language> scenario_languages;
  std::vector<RubricScore> scores;
  std::vector<LinguisticEntry> linguistics;
};

struct ReportRow {
  std::string criterion_id;
  std::string label;
  /// One per model column; nullopt renders as "-".
  std::vector<std::optional<std::string>> cells;
  /// Contributing values per cell (scores or sessions).
  std::vector<int> counts;
};

struct ReportTable {
  CriterionKind kind = CriterionKind::Quantitative;
  dialog::Language language = dialog::Language::English;
  std::string title;
  std::vector<ModelColumn> columns;
  std::vector<ReportRow> rows;

  /// "<kind>_<language>", e.g. "quantitative_en".
  std::string slug() const;
};

struct ReportDocument {
  std::vector<ReportTable> tables;
  std::vector<std::string> warnings;
  /// model id -> mean latency over its sessions, when recorded.
  std::map<std::string, double> mean_latency_ms;
};

/// One table per (kind, language) that has data, ordered English before
/// Greek and quantitative, qualitative, linguistic within a language. Score
/// tables list the criteria scored at least once for that language; empty
/// cells become "-" and add a coverage warning.
ReportDocument build_report(const ReportInput& input);

std::string render_markdown(const ReportDocument& report);
/// Header: criterion,<model ids...>; cells as displayed.
std::string render_table_csv(const ReportTable& table);
/// Reads back a table written by render_table_csv (labels and cells only).
ReportTable parse_table_csv(std::string_view text);
std::string render_json(const ReportDocument& report);

}  // namespace lsa::rubric
