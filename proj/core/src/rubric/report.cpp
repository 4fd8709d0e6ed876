#include "lsa/rubric/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "lsa/error.hpp"
#include "util/csv.hpp"

namespace lsa::rubric {

namespace {

using dialog::Language;

constexpr Language kLanguages[] = {Language::English, Language::Greek};

std::string language_name(Language language) {
  return language == Language::Greek ? "Greek" : "English";
}

std::string kind_title(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Quantitative: return "Quantitative evaluation";
    case CriterionKind::Qualitative: return "Qualitative evaluation";
    case CriterionKind::Linguistic: return "Linguistic analysis";
  }
  return "";
}

ReportTable make_table(CriterionKind kind, Language language,
                       const std::vector<ModelColumn>& models) {
  ReportTable table;
  table.kind = kind;
  table.language = language;
  table.title = fmt::format("{} ({})", kind_title(kind), language_name(language));
  table.columns = models;
  return table;
}

std::optional<Language> language_of(const ReportInput& input, const std::string& scenario,
                                    std::set<std::string>& unknown) {
  const auto it = input.scenario_languages.find(scenario);
  if (it == input.scenario_languages.end()) {
    unknown.insert(scenario);
    return std::nullopt;
  }
  return it->second;
}

void add_score_tables(const ReportInput& input, Language language, ReportDocument& doc,
                      std::set<std::string>& unknown_scenarios) {
  std::vector<RubricScore> scores;
  for (const auto& s : input.scores) {
    if (language_of(input, s.scenario_id, unknown_scenarios) == language) scores.push_back(s);
  }
  std::map<std::pair<std::string, std::string>, AggregateCell> cells;
  for (auto& cell : aggregate(scores)) {
    cells.emplace(std::make_pair(cell.model_id, cell.criterion_id), cell);
  }
  for (const auto kind : {CriterionKind::Quantitative, CriterionKind::Qualitative}) {
    auto table = make_table(kind, language, input.models);
    for (const auto& c : criteria_of_kind(kind)) {
      const bool scored = std::any_of(scores.begin(), scores.end(), [&](const RubricScore& s) {
        return s.criterion_id == c.id;
      });
      if (!scored) continue;
      ReportRow row{c.id, c.name, {}, {}};
      for (const auto& model : input.models) {
        const auto it = cells.find({model.id, c.id});
        if (it == cells.end()) {
          row.cells.emplace_back(std::nullopt);
          row.counts.push_back(0);
          doc.warnings.push_back(fmt::format("no {} scores for model {} on '{}'",
                                             language_name(language), model.id, c.name));
        } else {
          row.cells.emplace_back(format_cell(it->second.mean));
          row.counts.push_back(it->second.n);
        }
      }
      table.rows.push_back(std::move(row));
    }
    if (!table.rows.empty()) doc.tables.push_back(std::move(table));
  }
}

void add_linguistic_table(const ReportInput& input, Language language, ReportDocument& doc) {
  struct Sums {
    Rational tokens;
    Rational topics;
    int n = 0;
  };
  std::map<std::string, Sums> per_model;
  bool any = false;
  for (const auto& e : input.linguistics) {
    if (e.language != language) continue;
    any = true;
    auto& sums = per_model[e.model_id];
    sums.tokens += Rational(e.token_count);
    sums.topics += Rational(e.main_topic_count);
    ++sums.n;
  }
  if (!any) return;
  auto table = make_table(CriterionKind::Linguistic, language, input.models);
  for (const auto& c : criteria_of_kind(CriterionKind::Linguistic)) {
    ReportRow row{c.id, c.name, {}, {}};
    for (const auto& model : input.models) {
      const auto it = per_model.find(model.id);
      if (it == per_model.end()) {
        row.cells.emplace_back(std::nullopt);
        row.counts.push_back(0);
        continue;
      }
      const auto& sums = it->second;
      const auto total = c.id == kTokensCriterion ? sums.tokens : sums.topics;
      row.cells.emplace_back(format_truncated(total / Rational(sums.n), 2));
      row.counts.push_back(sums.n);
    }
    table.rows.push_back(std::move(row));
  }
  for (const auto& model : input.models) {
    if (!per_model.contains(model.id)) {
      doc.warnings.push_back(fmt::format("no {} linguistic analysis for model {}",
                                         language_name(language), model.id));
    }
  }
  doc.tables.push_back(std::move(table));
}

std::string markdown_escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string ReportTable::slug() const {
  return fmt::format("{}_{}", to_string(kind), dialog::language_code(language));
}

ReportDocument build_report(const ReportInput& input) {
  if (input.models.empty()) throw Error(ErrorCode::InvalidInput, "report needs model columns");
  ReportDocument doc;
  std::set<std::string> unknown_scenarios;
  for (const auto language : kLanguages) {
    add_score_tables(input, language, doc, unknown_scenarios);
    add_linguistic_table(input, language, doc);
  }
  for (const auto& scenario : unknown_scenarios) {
    doc.warnings.push_back(
        fmt::format("scores for scenario '{}' skipped: language unknown", scenario));
  }
  std::set<std::string> column_ids;
  for (const auto& m : input.models) column_ids.insert(m.id);
  std::set<std::string> stray;
  for (const auto& s : input.scores) {
    if (!column_ids.contains(s.model_id)) stray.insert(s.model_id);
  }
  for (const auto& id : stray) {
    doc.warnings.push_back(fmt::format("scores for model '{}' have no report column", id));
  }
  if (input.scores.empty()) doc.warnings.push_back("no rubric scores supplied");
  std::map<std::string, std::pair<double, int>> latency;
  for (const auto& e : input.linguistics) {
    if (!e.mean_latency_ms) continue;
    auto& [sum, n] = latency[e.model_id];
    sum += *e.mean_latency_ms;
    ++n;
  }
  for (const auto& [model, acc] : latency) doc.mean_latency_ms[model] = acc.first / acc.second;
  return doc;
}

std::string render_markdown(const ReportDocument& report) {
  std::string out;
  for (const auto& table : report.tables) {
    out += "## " + table.title + "\n\n| Criterion |";
    for (const auto& col : table.columns) out += " " + markdown_escape(col.display_name) + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += "---|";
    out += "\n";
    for (const auto& row : table.rows) {
      out += "| " + markdown_escape(row.label) + " |";
      for (const auto& cell : row.cells) out += " " + cell.value_or("-") + " |";
      out += "\n";
    }
    out += "\n";
  }
  if (report.tables.empty()) out += "No data to report.\n\n";
  if (!report.warnings.empty()) {
    out += "## Warnings\n\n";
    for (const auto& w : report.warnings) out += "- " + w + "\n";
  }
  return out;
}

std::string render_table_csv(const ReportTable& table) {
  util::CsvRow header{"criterion"};
  for (const auto& col : table.columns) header.push_back(col.id);
  std::string out = util::csv_line(header);
  for (const auto& row : table.rows) {
    util::CsvRow line{row.label};
    for (const auto& cell : row.cells) line.push_back(cell.value_or("-"));
    out += util::csv_line(line);
  }
  return out;
}

ReportTable parse_table_csv(std::string_view text) {
  const auto rows = util::parse_csv(text);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "criterion") {
    throw Error(ErrorCode::InvalidInput, "report CSV must start with a 'criterion' header");
  }
  ReportTable table;
  for (std::size_t i = 1; i < rows.front().size(); ++i) {
    table.columns.push_back({rows.front()[i], rows.front()[i]});
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    if (fields.size() != table.columns.size() + 1) {
      throw Error(ErrorCode::InvalidInput, fmt::format("report CSV row {} has {} fields", r + 1,
                                                       fields.size()));
    }
    ReportRow row;
    row.label = fields[0];
    for (const auto& c : builtin_criteria()) {
      if (c.name == row.label) row.criterion_id = c.id;
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "-") {
        row.cells.emplace_back(std::nullopt);
      } else {
        parse_decimal(fields[i]);
        row.cells.emplace_back(fields[i]);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_json(const ReportDocument& report) {
  nlohmann::ordered_json j;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& table : report.tables) {
    nlohmann::ordered_json t;
    t["slug"] = table.slug();
    t["kind"] = to_string(table.kind);
    t["language"] = dialog::language_code(table.language);
    t["title"] = table.title;
    t["columns"] = nlohmann::ordered_json::array();
    for (const auto& col : table.columns) {
      t["columns"].push_back({{"id", col.id}, {"display_name", col.display_name}});
    }
    t["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json cells = nlohmann::ordered_json::array();
      for (const auto& cell : row.cells) {
        cells.push_back(cell ? nlohmann::ordered_json(*cell) : nlohmann::ordered_json(nullptr));
      }
      t["rows"].push_back({{"criterion_id", row.criterion_id},
                           {"label", row.label},
                           {"cells", cells},
                           {"counts", row.counts}});
    }
    j["tables"].push_back(std::move(t));
  }
  j["mean_latency_ms"] = report.mean_latency_ms;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

}  // namespace lsa::rubric
