#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "lsa/dialog/types.hpp"
#include "lsa/linguistics/tokenizer.hpp"

namespace lsa::linguistics {

using StopwordSet = std::unordered_set<std::string>;

/// Small built-in lists, case-folded.
StopwordSet builtin_stopwords(dialog::Language language);
/// One lowercase term per line, UTF-8; blank lines and '#' comments skipped.
StopwordSet load_stopwords(const std::filesystem::path& path);

struct DocumentTermMatrix {
  /// Sorted, unique, case-folded terms.
  std::vector<std::string> vocab;
  /// counts[d][v]: occurrences of vocab[v] in document d.
  std::vector<std::vector<int>> counts;
  std::vector<std::string> doc_ids;
  /// Documents left with no terms after filtering. They keep their zero row.
  std::vector<std::size_t> empty_docs;

  std::size_t num_docs() const noexcept { return counts.size(); }
  std::size_t vocab_size() const noexcept { return vocab.size(); }
  long long doc_length(std::size_t doc) const;
  long long total_tokens() const;
};

/// Case-folded Word tokens with at least `min_len` code points that are not
/// stopwords. EmptyCorpus when nothing survives in any document.
DocumentTermMatrix build_dtm(const std::vector<std::vector<Token>>& docs,
                             const StopwordSet& stopwords, std::size_t min_len,
                             std::vector<std::string> doc_ids = {});

}  // namespace lsa::linguistics
