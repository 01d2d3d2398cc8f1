#include "qwalk/rational.hpp"

#include <cmath>

#include "qwalk/error.hpp"

namespace qwalk {

std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

Rational parse_fraction(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt(text));
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::usage, "zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e) != nullptr) throw;
    throw Error(ErrorCode::usage, "not a fraction: '" + text + "'");
  }
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

bool rationalize(double value, Rational& out, std::int64_t max_denominator, double tol) {
  if (!std::isfinite(value)) return false;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    if (std::abs(a) > 9.0e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - value) <= tol) {
      out = Rational(p1, q1);
      return true;
    }
    const double frac = x - a;
    if (frac == 0.0) break;
    x = 1.0 / frac;
  }
  return false;
}

}  // namespace qwalk
