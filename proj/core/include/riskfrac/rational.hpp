#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace riskfrac {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "3", "-1/2", "0.125" or "2.5e-3" into an exact rational.
// Throws riskfrac::domain_error on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

std::string to_string(const Rational& r);

} // namespace riskfrac
