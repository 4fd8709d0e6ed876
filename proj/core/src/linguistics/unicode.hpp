#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lsa::linguistics::unicode {

struct CodePoint {
  std::int32_t value;
  std::size_t begin;
  std::size_t end;
};

/// InvalidInput on malformed UTF-8.
std::vector<CodePoint> decode(std::string_view text);

bool is_whitespace(std::int32_t c);
/// General category P* or S*.
bool is_punct_or_symbol(std::int32_t c);
bool is_digit(std::int32_t c);
/// Letters, marks and digits.
bool is_word_char(std::int32_t c);
bool is_apostrophe(std::int32_t c);
bool is_hyphen(std::int32_t c);

void append_utf8(std::string& out, std::int32_t c);

}  // namespace lsa::linguistics::unicode
