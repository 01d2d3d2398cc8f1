#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace qwalk {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" with q > 0, always including the denominator ("160/1").
std::string to_fraction_string(const Rational& r);
/// Inverse of to_fraction_string; also accepts a bare integer. Throws Error(usage).
Rational parse_fraction(const std::string& text);
double to_double(const Rational& r);

/// Continued-fraction approximation with denominator <= max_denominator.
/// Returns false when no such fraction lies within tol of value.
bool rationalize(double value, Rational& out, std::int64_t max_denominator = 1 << 20,
                 double tol = 1e-15);

}  // namespace qwalk
