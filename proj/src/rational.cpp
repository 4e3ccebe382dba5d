#include "ct/rational.hpp"

#include <cctype>
#include <sstream>

namespace ct {

namespace {

using Int = boost::multiprecision::cpp_int;

bool read_digits(std::string_view text, std::size_t& pos, Int& value, int* count = nullptr) {
  std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + (text[pos] - '0');
    ++pos;
  }
  if (count) *count = static_cast<int>(pos - start);
  return pos > start;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  Int whole = 0;
  if (!read_digits(text, pos, whole)) return std::nullopt;

  Int num = whole;
  Int den = 1;

  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    Int d = 0;
    if (!read_digits(text, pos, d) || d == 0 || pos != text.size()) return std::nullopt;
    num = whole;
    den = d;
  } else {
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      Int frac = 0;
      int digits = 0;
      if (!read_digits(text, pos, frac, &digits)) return std::nullopt;
      for (int i = 0; i < digits; ++i) den *= 10;
      num = whole * den + frac;
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      ++pos;
      bool exp_neg = false;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        exp_neg = text[pos] == '-';
        ++pos;
      }
      Int exp = 0;
      if (!read_digits(text, pos, exp) || exp > 4096) return std::nullopt;
      for (Int i = 0; i < exp; ++i) {
        if (exp_neg)
          den *= 10;
        else
          num *= 10;
      }
    }
    if (pos != text.size()) return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;

  Rational r(num, den);
  if (negative) r = -r;
  return r;
}

std::string format_rational(const Rational& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << '/' << denominator(r);
  return out.str();
}

}  // namespace ct
