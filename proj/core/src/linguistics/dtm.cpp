#include "lsa/linguistics/dtm.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lsa/error.hpp"
#include "resources.hpp"
#include "util/fs.hpp"

namespace lsa::linguistics {

namespace {

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    words.insert(fold_case(std::string_view(line).substr(first)));
  }
  return words;
}

}  // namespace

StopwordSet builtin_stopwords(dialog::Language language) {
  const auto name = language == dialog::Language::Greek ? "stopwords/el.txt" : "stopwords/en.txt";
  return parse_stopwords(resources::find_embedded_resource(name));
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(util::read_file(path));
}

long long DocumentTermMatrix::doc_length(std::size_t doc) const {
  long long total = 0;
  for (const int c : counts.at(doc)) total += c;
  return total;
}

long long DocumentTermMatrix::total_tokens() const {
  long long total = 0;
  for (std::size_t d = 0; d < counts.size(); ++d) total += doc_length(d);
  return total;
}

DocumentTermMatrix build_dtm(const std::vector<std::vector<Token>>& docs,
                             const StopwordSet& stopwords, std::size_t min_len,
                             std::vector<std::string> doc_ids) {
  if (!doc_ids.empty() && doc_ids.size() != docs.size()) {
    throw Error(ErrorCode::InvalidInput, "doc_ids size does not match document count");
  }
  std::vector<std::map<std::string, int>> per_doc(docs.size());
  std::map<std::string, int> vocab_index;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& token : docs[d]) {
      if (token.kind != TokenKind::Word) continue;
      auto term = fold_case(token.surface);
      if (codepoint_count(term) < min_len || stopwords.contains(term)) continue;
      vocab_index.emplace(term, 0);
      ++per_doc[d][std::move(term)];
    }
  }
  if (vocab_index.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no terms left after tokenization and filtering");
  }

  DocumentTermMatrix dtm;
  dtm.vocab.reserve(vocab_index.size());
  for (auto& [term, index] : vocab_index) {
    index = static_cast<int>(dtm.vocab.size());
    dtm.vocab.push_back(term);
  }
  dtm.counts.assign(docs.size(), std::vector<int>(dtm.vocab.size(), 0));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& [term, count] : per_doc[d]) dtm.counts[d][vocab_index.at(term)] = count;
    if (per_doc[d].empty()) dtm.empty_docs.push_back(d);
  }
  if (doc_ids.empty()) {
    for (std::size_t d = 0; d < docs.size(); ++d) doc_ids.push_back("doc" + std::to_string(d));
  }
  dtm.doc_ids = std::move(doc_ids);
  return dtm;
}

}  // namespace lsa::linguistics
