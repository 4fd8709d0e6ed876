#include "lsa/rubric/scores.hpp"

#include <charconv>

#include <fmt/format.h>

#include "lsa/error.hpp"
#include "lsa/rubric/criteria.hpp"
#include "util/csv.hpp"
#include "util/fs.hpp"

namespace lsa::rubric {

namespace {

const std::vector<std::string> kHeader{"model_id", "scenario_id", "criterion_id",
                                       "rater_id", "value",       "note"};

int parse_value(const std::string& text, std::size_t line) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::InvalidInput,
                fmt::format("line {}: value '{}' is not an integer", line, text));
  }
  return value;
}

}  // namespace

ScoreKey key_of(const RubricScore& score) {
  return {score.model_id, score.scenario_id, score.criterion_id, score.rater_id};
}

void validate_score(const RubricScore& score, const std::set<std::string>* known_models) {
  if (score.value < 1 || score.value > 5) {
    throw Error(ErrorCode::Range,
                fmt::format("score {} outside the 1-5 Likert range", score.value));
  }
  const auto* c = find_criterion(score.criterion_id);
  if (c == nullptr || c->kind == CriterionKind::Linguistic) {
    throw Error(ErrorCode::NotFound, "unknown rubric criterion: " + score.criterion_id);
  }
  if (score.model_id.empty() || score.scenario_id.empty() || score.rater_id.empty()) {
    throw Error(ErrorCode::InvalidInput, "score needs model, scenario and rater ids");
  }
  if (known_models != nullptr && !known_models->empty() &&
      !known_models->contains(score.model_id)) {
    throw Error(ErrorCode::NotFound, "unknown model: " + score.model_id);
  }
}

ScoreBook::ScoreBook(std::set<std::string> known_models)
    : known_models_(std::move(known_models)) {}

void ScoreBook::record(const RubricScore& score, bool overwrite) {
  validate_score(score, known_models_ ? &*known_models_ : nullptr);
  auto key = key_of(score);
  const auto it = scores_.find(key);
  if (it != scores_.end()) {
    if (!overwrite) {
      throw Error(ErrorCode::Conflict,
                  fmt::format("score for ({}, {}, {}, {}) already recorded", key.model_id,
                              key.scenario_id, key.criterion_id, key.rater_id));
    }
    it->second = score;
    return;
  }
  scores_.emplace(std::move(key), score);
}

bool ScoreBook::contains(const ScoreKey& key) const { return scores_.contains(key); }

std::vector<RubricScore> ScoreBook::scores() const {
  std::vector<RubricScore> out;
  out.reserve(scores_.size());
  for (const auto& [key, score] : scores_) out.push_back(score);
  return out;
}

std::string ScoreBook::to_csv() const { return scores_to_csv(scores()); }

ScoreBook ScoreBook::from_csv(std::string_view text, std::set<std::string> known_models,
                              bool overwrite) {
  ScoreBook book(std::move(known_models));
  std::size_t line = 1;
  for (const auto& score : parse_scores_csv(text)) {
    ++line;
    try {
      book.record(score, overwrite);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("scores row {}: {}", line, e.what()));
    }
  }
  return book;
}

std::vector<RubricScore> parse_scores_csv(std::string_view text) {
  const auto rows = util::parse_csv(text);
  if (rows.empty()) return {};
  if (rows.front() != kHeader) {
    throw Error(ErrorCode::InvalidInput,
                fmt::format("scores CSV header must be '{}'", kScoresCsvHeader));
  }
  std::vector<RubricScore> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 5 && row.size() != 6) {
      throw Error(ErrorCode::InvalidInput,
                  fmt::format("scores row {} has {} fields", i + 1, row.size()));
    }
    RubricScore score{row[0], row[1], row[2], row[3], parse_value(row[4], i + 1),
                      row.size() == 6 ? row[5] : std::string{}};
    out.push_back(std::move(score));
  }
  return out;
}

std::string scores_to_csv(const std::vector<RubricScore>& scores) {
  std::string out = util::csv_line(kHeader);
  for (const auto& s : scores) {
    out += util::csv_line({s.model_id, s.scenario_id, s.criterion_id, s.rater_id,
                           std::to_string(s.value), s.note});
  }
  return out;
}

ScoreFile::ScoreFile(std::filesystem::path path, std::set<std::string> known_models)
    : path_(std::move(path)), known_models_(std::move(known_models)) {}

ScoreBook ScoreFile::load() const {
  if (!std::filesystem::exists(path_)) return ScoreBook(known_models_);
  return ScoreBook::from_csv(util::read_file(path_), known_models_);
}

void ScoreFile::record(const RubricScore& score, bool overwrite) {
  util::FileLock lock(std::filesystem::path(path_) += ".lock");
  auto book = load();
  book.record(score, overwrite);
  util::write_file_atomic(path_, book.to_csv());
}

std::size_t ScoreFile::import_csv(std::string_view text, bool overwrite) {
  const auto incoming = parse_scores_csv(text);
  util::FileLock lock(std::filesystem::path(path_) += ".lock");
  auto book = load();
  std::size_t line = 1;
  for (const auto& score : incoming) {
    ++line;
    try {
      book.record(score, overwrite);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("import row {}: {}", line, e.what()));
    }
  }
  util::write_file_atomic(path_, book.to_csv());
  return incoming.size();
}

std::vector<AggregateCell> aggregate(const std::vector<RubricScore>& scores) {
  std::map<std::pair<std::string, std::string>, std::pair<Rational, int>> sums;
  for (const auto& s : scores) {
    auto& [sum, n] = sums[{s.model_id, s.criterion_id}];
    sum += Rational(s.value);
    ++n;
  }
  std::vector<AggregateCell> out;
  out.reserve(sums.size());
  for (const auto& [key, acc] : sums) {
    out.push_back({key.first, key.second, acc.first / Rational(acc.second), acc.second});
  }
  return out;
}

}  // namespace lsa::rubric
