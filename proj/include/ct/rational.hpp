#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace ct {

// Exact rational arithmetic for energy bookkeeping. Arbitrary precision so that
// decimal inputs like "0.333333333333" stay exact through solver pivots.
using Rational = boost::multiprecision::cpp_rational;

// Accepts integers ("-3"), fractions ("7/2"), and decimals with an optional
// exponent ("0.25", "2.5e-2"). Returns nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

// Canonical form: "p" when the denominator is 1, otherwise "p/q" with q > 0.
std::string format_rational(const Rational& r);

}  // namespace ct
