#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace sonc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);

// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);

// Accepts "p/q", plain integers, and decimal literals like "-3.25".
Rational parse_rational(const std::string& text);

// "p/q" when the denominator is not 1, "p" otherwise.
std::string format_rational(const Rational& q);

// Best continued-fraction approximation with denominator <= max_denominator.
Rational round_rational(double x, std::uint64_t max_denominator);

}  // namespace sonc
