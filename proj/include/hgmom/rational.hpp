#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace hgmom {

// Exact arithmetic used by every recurrence and enumeration path.
// Floating point appears only in diagnostics and Monte Carlo code.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// C(n, k) with the convention that out-of-range arguments give 0.
Int binomial(long long n, long long k);

Int factorial(int n);

// 1/n! for n >= 0, and exactly 0 for negative n.  Terms carrying a
// factorial of a negative number are dropped wholesale, which is the
// convention the moment formulas rely on.
Rat inv_factorial(int n);

// n * (n-1) * ... * (n-count+1); zero once the product crosses zero.
Int falling_factorial(const Int& n, int count);

Rat rat_pow(const Rat& base, int exponent);

double to_double(const Rat& value);

// Canonical "numerator/denominator" rendering, e.g. "3/2", "-1/4", "5/1".
std::string to_fraction_string(const Rat& value);

// Accepts "a", "-a", "a/b" and plain decimals such as "0.25" or "-1.5".
// Throws std::invalid_argument on anything else.
Rat parse_rational(const std::string& text);

}  // namespace hgmom
