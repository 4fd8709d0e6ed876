#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lsa::rubric {

/// Exact fraction kept in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept { return static_cast<double>(num_) / den_; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& other) { return *this = *this + other; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::string to_string(const Rational& r);

/// Truncates toward zero to `decimals` places, then drops trailing zeros
/// and a bare decimal point: 14/3 -> "4.66", 9/2 -> "4.5", 4 -> "4".
std::string format_truncated(const Rational& value, int decimals = 2);

/// format_truncated for Likert means; Range error outside [1, 5].
std::string format_cell(const Rational& mean);

/// Parses a plain decimal such as "4.66", "-2" or "300.33" exactly.
/// InvalidInput on anything else.
Rational parse_decimal(std::string_view text);

}  // namespace lsa::rubric
