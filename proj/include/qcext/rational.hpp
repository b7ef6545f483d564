#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qcext {

using Rational = mpq_class;

// num/den in lowest terms (the two-argument mpq constructor does not reduce).
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p/q", "-p/q" and plain integers.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);
Rational abs_value(const Rational& r);

// Smallest dyadic rational >= x, assuming x carries at most a few ulps of error.
Rational round_up(double x);

}  // namespace qcext
