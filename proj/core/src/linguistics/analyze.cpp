#include "lsa/linguistics/analyze.hpp"

#include <json.hpp>

#include "lsa/error.hpp"

namespace lsa::linguistics {

LinguisticReport analyze(const std::vector<std::string>& documents, dialog::Language language,
                         const AnalysisParams& params) {
  LinguisticReport report;
  report.language = std::string(dialog::language_code(language));
  report.documents = documents.size();
  report.topics = params.lda.topics;
  report.threshold = params.threshold;
  report.seed = params.lda.seed;

  std::vector<std::vector<Token>> tokenized;
  tokenized.reserve(documents.size());
  for (const auto& doc : documents) {
    auto tokens = tokenize(doc, language);
    const auto counts = count_tokens(tokens);
    report.word_tokens += counts.words;
    report.number_tokens += counts.numbers;
    report.punct_tokens += counts.punct;
    tokenized.push_back(std::move(tokens));
  }
  report.token_count = report.word_tokens + report.number_tokens + report.punct_tokens;

  const auto stopwords = params.stopwords ? *params.stopwords : builtin_stopwords(language);
  const auto dtm = build_dtm(tokenized, stopwords, params.min_len);
  const auto model = lda_fit(dtm, params.lda);
  report.topic_prevalences = topic_prevalence(model, dtm);
  report.main_topic_count = count_main_topics(report.topic_prevalences, params.threshold);
  report.top_terms_per_topic = top_terms(model, dtm, params.top_terms);
  report.warnings = model.warnings;
  return report;
}

std::string report_to_json(const LinguisticReport& report) {
  nlohmann::ordered_json j;
  j["language"] = report.language;
  j["documents"] = report.documents;
  j["token_count"] = report.token_count;
  j["word_tokens"] = report.word_tokens;
  j["number_tokens"] = report.number_tokens;
  j["punct_tokens"] = report.punct_tokens;
  j["topics"] = report.topics;
  j["main_topic_count"] = report.main_topic_count;
  j["threshold"] = report.threshold;
  j["seed"] = report.seed;
  j["topic_prevalences"] = report.topic_prevalences;
  j["top_terms_per_topic"] = report.top_terms_per_topic;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

LinguisticReport report_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    LinguisticReport report;
    report.language = j.at("language").get<std::string>();
    report.documents = j.at("documents").get<std::size_t>();
    report.token_count = j.at("token_count").get<std::size_t>();
    report.word_tokens = j.at("word_tokens").get<std::size_t>();
    report.number_tokens = j.at("number_tokens").get<std::size_t>();
    report.punct_tokens = j.at("punct_tokens").get<std::size_t>();
    report.topics = j.at("topics").get<int>();
    report.main_topic_count = j.at("main_topic_count").get<int>();
    report.threshold = j.at("threshold").get<double>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.topic_prevalences = j.at("topic_prevalences").get<std::vector<double>>();
    report.top_terms_per_topic =
        j.at("top_terms_per_topic").get<std::vector<std::vector<std::string>>>();
    report.warnings = j.value("warnings", std::vector<std::string>{});
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed linguistic report: ") + e.what());
  }
}

}  // namespace lsa::linguistics
