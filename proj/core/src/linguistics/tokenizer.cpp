#include "lsa/linguistics/tokenizer.hpp"

#include <span>

#include <unicode/uchar.h>

#include "linguistics/unicode.hpp"
#include "lsa/error.hpp"

namespace lsa::linguistics {

namespace {

using unicode::CodePoint;

bool is_number_separator(std::int32_t c) { return c == '.' || c == ',' || c == ':'; }

TokenKind classify(std::span<const CodePoint> piece) {
  for (const auto& cp : piece) {
    if (!unicode::is_digit(cp.value) && !is_number_separator(cp.value)) return TokenKind::Word;
  }
  return TokenKind::Number;
}

void emit(std::vector<Token>& out, std::string_view text, std::span<const CodePoint> piece,
          TokenKind kind) {
  const auto begin = piece.front().begin;
  const auto end = piece.back().end;
  out.push_back(Token{std::string(text.substr(begin, end - begin)), kind, begin, end});
}

// Splits one whitespace-free chunk.
void split_chunk(std::vector<Token>& out, std::string_view text, std::span<const CodePoint> chunk) {
  std::size_t piece_start = 0;
  auto flush = [&](std::size_t end) {
    if (end > piece_start) {
      const auto piece = chunk.subspan(piece_start, end - piece_start);
      emit(out, text, piece, classify(piece));
    }
  };
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const auto c = chunk[i].value;
    if (!unicode::is_punct_or_symbol(c)) continue;
    const bool has_prev = i > 0 && i > piece_start;
    const bool has_next = i + 1 < chunk.size();
    const auto prev = has_prev ? chunk[i - 1].value : 0;
    const auto next = has_next ? chunk[i + 1].value : 0;
    const bool joins_word = (unicode::is_apostrophe(c) || unicode::is_hyphen(c)) && has_prev &&
                            has_next && unicode::is_word_char(prev) &&
                            unicode::is_word_char(next);
    const bool joins_number = is_number_separator(c) && has_prev && has_next &&
                              unicode::is_digit(prev) && unicode::is_digit(next);
    if (joins_word || joins_number) continue;
    flush(i);
    emit(out, text, chunk.subspan(i, 1), TokenKind::Punct);
    piece_start = i + 1;
  }
  flush(chunk.size());
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "word";
    case TokenKind::Number: return "number";
    case TokenKind::Punct: return "punct";
  }
  return "word";
}

std::vector<Token> tokenize(std::string_view text, dialog::Language) {
  // The rules are script-agnostic; the language parameter is kept for
  // callers that pair tokenization with language-specific filtering.
  const auto cps = unicode::decode(text);
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (unicode::is_whitespace(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !unicode::is_whitespace(cps[j].value)) ++j;
    split_chunk(tokens, text, std::span<const CodePoint>(cps).subspan(i, j - i));
    i = j;
  }
  return tokens;
}

TokenCounts count_tokens(const std::vector<Token>& tokens) {
  TokenCounts counts;
  for (const auto& token : tokens) {
    switch (token.kind) {
      case TokenKind::Word: ++counts.words; break;
      case TokenKind::Number: ++counts.numbers; break;
      case TokenKind::Punct: ++counts.punct; break;
    }
  }
  return counts;
}

bool is_valid_utf8(std::string_view text) {
  try {
    unicode::decode(text);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const auto& cp : unicode::decode(text)) {
    unicode::append_utf8(out, u_foldCase(cp.value, U_FOLD_CASE_DEFAULT));
  }
  return out;
}

std::size_t codepoint_count(std::string_view text) { return unicode::decode(text).size(); }

}  // namespace lsa::linguistics
