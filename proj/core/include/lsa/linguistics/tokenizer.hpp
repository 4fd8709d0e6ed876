#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/dialog/types.hpp"

namespace lsa::linguistics {

enum class TokenKind { Word, Number, Punct };

std::string_view to_string(TokenKind kind);

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::Word;
  /// Byte offsets into the source, half-open.
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Deterministic rule-based tokenizer for Latin and Greek text.
///
/// Text is split on Unicode White_Space. Within each chunk, punctuation and
/// symbol code points become one-character Punct tokens, except apostrophes
/// and hyphens between two word characters (kept inside the word) and
/// '.', ',' or ':' between two digits (kept inside the number). Remaining
/// pieces made only of digits and those separators are Number tokens,
/// everything else is a Word. Invalid UTF-8 is rejected with InvalidInput.
std::vector<Token> tokenize(std::string_view text,
                            dialog::Language language = dialog::Language::English);

struct TokenCounts {
  std::size_t words = 0;
  std::size_t numbers = 0;
  std::size_t punct = 0;

  std::size_t total() const noexcept { return words + numbers + punct; }
};

TokenCounts count_tokens(const std::vector<Token>& tokens);

bool is_valid_utf8(std::string_view text);
/// Unicode simple case folding, code point by code point (Σ and ς fold to σ).
std::string fold_case(std::string_view text);
std::size_t codepoint_count(std::string_view text);

}  // namespace lsa::linguistics
