#include "sonc/rational.hpp"

#include <cctype>

namespace sonc {

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error("bad rational '" + std::string(whole) + "'");
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw Error("bad rational '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw Error("bad rational '" + std::string(whole) + "'");
  }
  Integer z;
  z.set_str(std::string(s[0] == '+' ? s.substr(1) : s), 10);
  return z;
}

Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    Integer ez = parse_integer(text.substr(e + 1), text);
    if (ez > 100000 || ez < -100000) throw Error("exponent out of range in '" + std::string(text) + "'");
    exp10 = ez.get_si();
  }
  std::string digits;
  bool neg = false;
  std::size_t i = 0;
  if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
    neg = mant[0] == '-';
    i = 1;
  }
  long frac = 0;
  bool seen_dot = false;
  for (; i < mant.size(); ++i) {
    char c = mant[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac;
    } else {
      throw Error("bad rational '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw Error("bad rational '" + std::string(text) + "'");
  Integer num(digits, 10);
  if (neg) num = -num;
  long shift = exp10 - frac;
  Rational r;
  if (shift >= 0) {
    r = Rational(num * pow10(static_cast<unsigned long>(shift)));
  } else {
    r = Rational(num, pow10(static_cast<unsigned long>(-shift)));
    r.canonicalize();
  }
  return r;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Integer lcm_of_denominators(const RationalPoint& p) {
  Integer l = 1;
  for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return l;
}

RationalPoint midpoint(const RationalPoint& a, const RationalPoint& b) {
  RationalPoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) / 2;
  return r;
}

RationalPoint lerp(const RationalPoint& a, const RationalPoint& b, const Rational& t) {
  RationalPoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

RationalPoint scale(const RationalPoint& a, const Rational& s) {
  RationalPoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

std::string to_string(const RationalPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += to_string(p[i]);
  }
  return s + ")";
}

}  // namespace sonc
