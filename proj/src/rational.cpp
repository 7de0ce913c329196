#include "sonc/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sonc {

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 bits of mantissa fit in an int64 after scaling.
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp >= 0) {
    r *= Rational(BigInt(1) << exp);
  } else {
    r /= Rational(BigInt(1) << (-exp));
  }
  return r;
}

namespace {

// cpp_int's string constructor honors 0x/0 prefixes; force base 10.
BigInt decimal_bigint(std::string digits) {
  bool negative = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    negative = digits[0] == '-';
    digits.erase(digits.begin());
  }
  if (digits.empty()) throw std::invalid_argument("empty integer literal");
  BigInt value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed integer literal");
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num = decimal_bigint(text.substr(0, slash));
    BigInt den = decimal_bigint(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(decimal_bigint(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_len = text.size() - dot - 1;
  BigInt num = decimal_bigint(digits);
  BigInt den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  return Rational(num, den);
}

std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).convert_to<std::string>();
  return numerator(q).convert_to<std::string>() + "/" + denominator(q).convert_to<std::string>();
}

Rational round_rational(double x, std::uint64_t max_denominator) {
  Rational exact = rational_from_double(x);
  if (denominator(exact) <= max_denominator) return exact;
  bool neg = exact < 0;
  Rational v = neg ? Rational(-exact) : exact;

  // Convergents of the continued fraction of v.
  BigInt p = numerator(v), q = denominator(v);
  BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  BigInt bound(max_denominator);
  while (q != 0) {
    BigInt a = p / q;
    BigInt h2 = a * h1 + h0;
    BigInt k2 = a * k1 + k0;
    if (k2 > bound) break;
    h0 = h1; h1 = h2;
    k0 = k1; k1 = k2;
    BigInt r = p % q;
    p = q;
    q = r;
  }
  Rational best(h1, k1);
  return neg ? Rational(-best) : best;
}

}  // namespace sonc
