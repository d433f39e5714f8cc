#include "kdep/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace kdep {

namespace {

Integer pow10(unsigned exponent) {
  Integer result = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    result *= 10;
  }
  return result;
}

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    }
  }
  return Integer(std::string(digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) {
    throw std::invalid_argument("empty number");
  }
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational value;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(text.substr(0, slash), whole);
    const Integer den = parse_integer(text.substr(slash + 1), whole);
    if (den == 0) {
      throw std::invalid_argument("zero denominator: '" + std::string(whole) + "'");
    }
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      const std::string exp_text(text.substr(e + 1));
      char* end = nullptr;
      exponent = std::strtol(exp_text.c_str(), &end, 10);
      if (exp_text.empty() || end != exp_text.c_str() + exp_text.size()) {
        throw std::invalid_argument("malformed exponent: '" + std::string(whole) + "'");
      }
      text = text.substr(0, e);
    }
    std::string digits;
    long fraction_digits = 0;
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
      fraction_digits = static_cast<long>(text.size() - dot - 1);
    } else {
      digits = std::string(text);
    }
    const Integer mantissa = parse_integer(digits, whole);
    const long shift = exponent - fraction_digits;
    if (shift >= 0) {
      value = Rational(mantissa * pow10(static_cast<unsigned>(shift)));
    } else {
      value = Rational(mantissa, pow10(static_cast<unsigned>(-shift)));
    }
  }
  return negative ? Rational(-value) : value;
}

std::string to_fraction_string(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

std::string to_decimal_string(const Rational& value, int significant_digits) {
  if (value == 0) {
    return "0";
  }
  // Scale into [10^(d-1), 10^d), round half away from zero, then place the point.
  Rational magnitude = value < 0 ? Rational(-value) : value;
  long exponent = 0;
  const Rational lower = Rational(pow10(static_cast<unsigned>(significant_digits - 1)));
  const Rational upper = Rational(pow10(static_cast<unsigned>(significant_digits)));
  while (magnitude >= upper) {
    magnitude /= 10;
    ++exponent;
  }
  while (magnitude < lower) {
    magnitude *= 10;
    --exponent;
  }
  const Integer num = boost::multiprecision::numerator(magnitude);
  const Integer den = boost::multiprecision::denominator(magnitude);
  Integer digits = (2 * num + den) / (2 * den);
  if (digits >= pow10(static_cast<unsigned>(significant_digits))) {
    digits /= 10;
    ++exponent;
  }
  std::string body = digits.str();
  // body has `significant_digits` characters representing body * 10^exponent.
  const long point = static_cast<long>(body.size()) + exponent;
  std::string out;
  if (point <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-point), '0') + body;
  } else if (point >= static_cast<long>(body.size())) {
    out = body + std::string(static_cast<std::size_t>(point - static_cast<long>(body.size())), '0');
  } else {
    out = body.substr(0, static_cast<std::size_t>(point)) + "." +
          body.substr(static_cast<std::size_t>(point));
  }
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') {
      out.pop_back();
    }
    if (out.back() == '.') {
      out.pop_back();
    }
  }
  return value < 0 ? "-" + out : out;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational dyadic(unsigned bits) {
  Integer den = 1;
  den <<= bits;
  return Rational(Integer(1), den);
}

}  // namespace kdep
