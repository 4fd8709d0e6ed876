#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lsa/rubric/rational.hpp"

namespace lsa::rubric {

struct RubricScore {
  std::string model_id;
  std::string scenario_id;
  std::string criterion_id;
  std::string rater_id;
  int value = 0;
  std::string note;

  friend bool operator==(const RubricScore&, const RubricScore&) = default;
};

struct ScoreKey {
  std::string model_id;
  std::string scenario_id;
  std::string criterion_id;
  std::string rater_id;

  friend auto operator<=>(const ScoreKey&, const ScoreKey&) = default;
};

ScoreKey key_of(const RubricScore& score);

inline constexpr std::string_view kScoresCsvHeader =
    "model_id,scenario_id,criterion_id,rater_id,value,note";

/// Range error unless 1 <= value <= 5; NotFound for unknown or linguistic
/// criteria, and for models outside `known_models` when that set is given.
void validate_score(const RubricScore& score, const std::set<std::string>* known_models = nullptr);

/// In-memory set of scores keyed by (model, scenario, criterion, rater).
class ScoreBook {
 public:
  ScoreBook() = default;
  explicit ScoreBook(std::set<std::string> known_models);

  /// Conflict when the key exists and `overwrite` is false.
  void record(const RubricScore& score, bool overwrite = false);
  bool contains(const ScoreKey& key) const;
  std::size_t size() const noexcept { return scores_.size(); }
  /// Sorted by key.
  std::vector<RubricScore> scores() const;

  std::string to_csv() const;
  /// Parses and records every row; row errors mention the line number.
  static ScoreBook from_csv(std::string_view text, std::set<std::string> known_models = {},
                            bool overwrite = false);

 private:
  std::optional<std::set<std::string>> known_models_;
  std::map<ScoreKey, RubricScore> scores_;
};

std::vector<RubricScore> parse_scores_csv(std::string_view text);
std::string scores_to_csv(const std::vector<RubricScore>& scores);

/// Durable score file: every record rewrites the CSV atomically under an
/// exclusive lock, so concurrent recorders are serialized.
class ScoreFile {
 public:
  explicit ScoreFile(std::filesystem::path path, std::set<std::string> known_models = {});

  void record(const RubricScore& score, bool overwrite = false);
  /// Merges rows from another CSV; returns the number imported.
  std::size_t import_csv(std::string_view text, bool overwrite = false);
  ScoreBook load() const;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::set<std::string> known_models_;
};

struct AggregateCell {
  std::string model_id;
  std::string criterion_id;
  Rational mean;
  int n = 0;
};

/// Exact mean per (model, criterion), ordered by (model, criterion).
std::vector<AggregateCell> aggregate(const std::vector<RubricScore>& scores);

}  // namespace lsa::rubric
