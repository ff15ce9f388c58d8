#include "hgmom/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace hgmom {

Int binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Int result = 1;
  for (long long i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

Int factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative argument");
  Int result = 1;
  for (int i = 2; i <= n; ++i) result *= i;
  return result;
}

Rat inv_factorial(int n) {
  if (n < 0) return 0;
  return Rat(Int(1), factorial(n));
}

Int falling_factorial(const Int& n, int count) {
  Int result = 1;
  for (int i = 0; i < count; ++i) result *= (n - i);
  return result;
}

Rat rat_pow(const Rat& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("negative power of zero");
    return 1 / rat_pow(base, -exponent);
  }
  Rat result = 1;
  Rat acc = base;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result *= acc;
    acc *= acc;
    e >>= 1;
  }
  return result;
}

double to_double(const Rat& value) { return value.convert_to<double>(); }

std::string to_fraction_string(const Rat& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty())
      throw std::invalid_argument("malformed fraction: " + text);
    try {
      Int n(num), d(den);
      if (d == 0) throw std::invalid_argument("zero denominator: " + text);
      return Rat(n, d);
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("malformed fraction: " + text);
    }
  }
  const auto dot = text.find('.');
  std::string digits = text;
  int frac_digits = 0;
  if (dot != std::string::npos) {
    digits = text.substr(0, dot) + text.substr(dot + 1);
    frac_digits = static_cast<int>(text.size() - dot - 1);
    if (frac_digits == 0) throw std::invalid_argument("malformed decimal: " + text);
  }
  std::size_t start = 0;
  if (digits[0] == '+' || digits[0] == '-') start = 1;
  if (start == digits.size())
    throw std::invalid_argument("malformed rational: " + text);
  for (std::size_t i = start; i < digits.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(digits[i])))
      throw std::invalid_argument("malformed rational: " + text);
  Int scale = 1;
  for (int i = 0; i < frac_digits; ++i) scale *= 10;
  return Rat(Int(digits), scale);
}

}  // namespace hgmom
