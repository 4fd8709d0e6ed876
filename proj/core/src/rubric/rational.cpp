#include "lsa/rubric/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>

#include "lsa/error.hpp"

namespace lsa::rubric {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::Range, "rational overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::Range, "rational overflow");
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational operator+(const Rational& a, const Rational& b) {
  return {checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
          checked_mul(a.den_, b.den_)};
}

Rational operator-(const Rational& a, const Rational& b) {
  return a + Rational(-b.num_, b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return {checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorCode::InvalidInput, "division by zero");
  return {checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_)};
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return checked_mul(a.num_, b.den_) <=> checked_mul(b.num_, a.den_);
}

std::string to_string(const Rational& r) {
  if (r.is_integer()) return std::to_string(r.num());
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

std::string format_truncated(const Rational& value, int decimals) {
  if (decimals < 0) throw Error(ErrorCode::InvalidInput, "negative decimal count");
  const bool negative = value.num() < 0;
  const auto magnitude = negative ? -value.num() : value.num();
  const auto den = value.den();
  std::string digits;
  auto remainder = magnitude % den;
  for (int i = 0; i < decimals; ++i) {
    remainder *= 10;
    digits.push_back(static_cast<char>('0' + remainder / den));
    remainder %= den;
  }
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  std::string out = std::to_string(magnitude / den);
  if (!digits.empty()) out += "." + digits;
  if (negative && out != "0") out.insert(out.begin(), '-');
  return out;
}

std::string format_cell(const Rational& mean) {
  if (mean < Rational(1) || mean > Rational(5)) {
    throw Error(ErrorCode::Range, "Likert mean outside [1, 5]: " + to_string(mean));
  }
  return format_truncated(mean, 2);
}

Rational parse_decimal(std::string_view text) {
  const auto fail = [&] {
    return Error(ErrorCode::InvalidInput, "not a decimal number: '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  std::int64_t num = 0;
  std::int64_t den = 1;
  int int_digits = 0;
  int frac_digits = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
    ++(seen_point ? frac_digits : int_digits);
    num = checked_add(checked_mul(num, 10), c - '0');
    if (seen_point) den = checked_mul(den, 10);
  }
  if (int_digits == 0 || (seen_point && frac_digits == 0)) throw fail();
  return {negative ? -num : num, den};
}

}  // namespace lsa::rubric
