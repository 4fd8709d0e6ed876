#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/linguistics/dtm.hpp"
#include "lsa/linguistics/lda.hpp"

namespace lsa::linguistics {

struct AnalysisParams {
  LdaParams lda;
  double threshold = 0.05;
  std::size_t min_len = 3;
  /// Overrides the built-in stopword list for the language.
  std::optional<StopwordSet> stopwords;
  std::size_t top_terms = 8;
};

struct LinguisticReport {
  std::string language;
  std::size_t documents = 0;
  /// Word + Number + Punct.
  std::size_t token_count = 0;
  std::size_t word_tokens = 0;
  std::size_t number_tokens = 0;
  std::size_t punct_tokens = 0;
  int topics = 0;
  int main_topic_count = 0;
  double threshold = 0.05;
  std::uint64_t seed = 0;
  std::vector<double> topic_prevalences;
  std::vector<std::vector<std::string>> top_terms_per_topic;
  std::vector<std::string> warnings;
};

/// tokenize -> build_dtm (one document per assistant reply) -> lda_fit ->
/// main_topic_count.
LinguisticReport analyze(const std::vector<std::string>& documents, dialog::Language language,
                         const AnalysisParams& params = {});

/// JSON with a fixed field order, two-space indented, trailing newline.
std::string report_to_json(const LinguisticReport& report);
LinguisticReport report_from_json(std::string_view json);

}  // namespace lsa::linguistics
