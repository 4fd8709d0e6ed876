#include "linguistics/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "lsa/error.hpp"

namespace lsa::linguistics::unicode {

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const auto start = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw Error(ErrorCode::InvalidInput,
                  "invalid UTF-8 at byte offset " + std::to_string(start));
    }
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_whitespace(std::int32_t c) { return u_isUWhiteSpace(c); }

bool is_punct_or_symbol(std::int32_t c) {
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

bool is_digit(std::int32_t c) { return u_isdigit(c); }

bool is_word_char(std::int32_t c) {
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_N_MASK)) != 0;
}

bool is_apostrophe(std::int32_t c) {
  return c == 0x27 || c == 0x2019 || c == 0x02BC;
}

bool is_hyphen(std::int32_t c) {
  return c == 0x2D || c == 0x2010 || c == 0x2011;
}

void append_utf8(std::string& out, std::int32_t c) {
  std::uint8_t buffer[U8_MAX_LENGTH];
  std::int32_t length = 0;
  U8_APPEND_UNSAFE(buffer, length, c);
  out.append(reinterpret_cast<const char*>(buffer), static_cast<std::size_t>(length));
}

}  // namespace lsa::linguistics::unicode
