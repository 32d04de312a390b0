#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sonc {

using Rational = mpq_class;
using Integer = mpz_class;

/// Points with rational coordinates. Exponent points of mediated sets live here.
using RationalPoint = std::vector<Rational>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts "12", "-3/4", "1.25", "2.5e-3". Decimal input is converted exactly.
Rational parse_rational(std::string_view text);

/// num/den in lowest terms. den must be nonzero.
Rational make_rational(const Integer& num, const Integer& den);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

Rational abs(const Rational& r);

bool is_integer(const Rational& r);

Integer lcm_of_denominators(const RationalPoint& p);

RationalPoint midpoint(const RationalPoint& a, const RationalPoint& b);

/// (1 - t) a + t b
RationalPoint lerp(const RationalPoint& a, const RationalPoint& b, const Rational& t);

RationalPoint scale(const RationalPoint& a, const Rational& s);

std::string to_string(const RationalPoint& p);

}  // namespace sonc
