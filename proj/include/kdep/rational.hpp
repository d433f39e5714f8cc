#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace kdep {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "3", "-2/7", "0.125" or "1e-30" into an exact rational.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& value);

/// Rounded decimal with the given number of significant digits.
std::string to_decimal_string(const Rational& value, int significant_digits = 12);

double to_double(const Rational& value);

/// 2^-bits as an exact rational.
Rational dyadic(unsigned bits);

}  // namespace kdep
