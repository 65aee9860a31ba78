#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace coso {

// Exact rational with arbitrary-precision numerator and denominator. Every
// entropy, rate and breakpoint in the solver path is one of these.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p/q", "p", and finite decimals such as "6.25" or "-0.5".
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers are written without a denominator.
std::string to_string(const Rational& value);

// Human-friendly decimal rendering, exact when the expansion terminates
// within `max_digits`, otherwise suffixed with "...".
std::string to_decimal(const Rational& value, int max_digits = 6);

Rational floor(const Rational& value);
Rational ceil(const Rational& value);
bool is_integer(const Rational& value);

}  // namespace coso
