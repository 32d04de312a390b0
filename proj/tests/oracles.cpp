#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <set>

namespace oracle {

namespace {

RationalPoint lift(const sonc::Exponent& e) {
  RationalPoint p;
  for (int v : e) p.push_back(Rational(v));
  return p;
}

RationalPoint pt(std::initializer_list<Rational> xs) { return RationalPoint(xs); }

}  // namespace

void add_to(PointPoly& p, const RationalPoint& at, const Rational& c) {
  Rational& slot = p[at];
  slot += c;
  if (slot == 0) p.erase(at);
}

PointPoly expand(const std::vector<sonc::ExactTriple>& triples) {
  PointPoly out;
  for (const auto& t : triples) {
    add_to(out, t.v, 2 * t.a);
    add_to(out, t.w, t.b);
    add_to(out, t.u, -2 * t.c);
  }
  return out;
}

PointPoly pn_minus(const sonc::SparsePoly& f, const Rational& xi) {
  PointPoly out;
  for (const auto& [e, c] : f.terms()) {
    bool even = true;
    for (int v : e) even = even && v % 2 == 0;
    Rational coef = even && c > 0 ? Rational(c) : Rational(-abs(c));
    add_to(out, lift(e), coef);
  }
  add_to(out, lift(sonc::Exponent(f.nvars(), 0)), -xi);
  return out;
}

bool in_cone(const Rational& a, const Rational& b, const Rational& c) {
  return a >= 0 && b >= 0 && 2 * a * b - c * c >= 0;
}

int ceil_log2(long p) {
  int k = 0;
  while ((1L << k) < p) ++k;
  return k;
}

bool mediated(long p, const std::vector<long>& interior) {
  std::set<long> all(interior.begin(), interior.end());
  all.insert(0);
  all.insert(p);
  for (long q : interior) {
    bool found = false;
    for (long v : all) {
      long w = 2 * q - v;
      if (w != v && all.count(w)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::size_t med_seq_size(long p, long q) {
  std::set<Integer> pts;
  for (const auto& t : sonc::med_seq(p, q)) pts.insert(t.u);
  return pts.size();
}

Rational average_med_seq_size(long p) {
  Integer total = 0, count = 0;
  for (long q = 1; q < p; ++q) {
    if (std::gcd(p, q) != 1) continue;
    total += static_cast<unsigned long>(med_seq_size(p, q));
    count += 1;
  }
  Rational avg(total, count);
  avg.canonicalize();
  return avg;
}

Integer denominator_bound(int n, int d) {
  Integer base = 1 + Integer(n) * d * d, out = 1;
  for (int i = 0; i <= n; ++i) out *= base;
  return out;
}

double triple_bound(int t, int n, int d) {
  double s = (n + 1) * std::log2(1.0 + static_cast<double>(n) * d * d) + 3;
  return t * n * s * s / 8;
}

long double evaluate(const sonc::SparsePoly& f, const std::vector<double>& x) {
  long double sum = 0;
  for (const auto& [e, c] : f.terms()) {
    long double m = static_cast<long double>(c.get_num().get_d()) / c.get_den().get_d();
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) m *= x[i];
    sum += m;
  }
  return sum;
}

long double magnitude(const sonc::SparsePoly& f, const std::vector<double>& x) {
  long double sum = 0;
  for (const auto& [e, c] : f.terms()) {
    long double m = std::fabs(c.get_d());
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(std::fabs(static_cast<long double>(x[i])), e[i]);
    sum += m;
  }
  return sum;
}

sonc::SparsePoly motzkin() {
  sonc::SparsePoly f(2);
  f.add_term({4, 2}, 1);
  f.add_term({2, 4}, 1);
  f.add_term({0, 0}, 1);
  f.add_term({2, 2}, -3);
  return f;
}

sonc::SparsePoly quadrinomial() {
  sonc::SparsePoly f(2);
  f.add_term({0, 0}, 1);
  f.add_term({4, 0}, 1);
  f.add_term({0, 4}, 1);
  f.add_term({1, 2}, -1);
  f.add_term({2, 1}, -1);
  f.add_term({1, 1}, 5);
  return f;
}

sonc::SparsePoly square_cover_poly() {
  sonc::SparsePoly f(2);
  f.add_term({4, 4}, 50);
  f.add_term({4, 0}, 1);
  f.add_term({0, 4}, 3);
  f.add_term({0, 0}, 800);
  f.add_term({1, 2}, -100);
  f.add_term({2, 1}, -100);
  return f;
}

sonc::SobsCertificate motzkin_golden_certificate() {
  const Rational half(1, 2);
  sonc::SobsCertificate cert;
  cert.n = 2;
  cert.poly_sha256 = sonc::poly_sha256(motzkin());
  cert.xi = 0;
  cert.mode = "direct";
  sonc::CertificateCircuit c;
  c.beta = {2, 2};
  c.trellis = {{4, 2}, {2, 4}, {0, 0}};
  // (x y - x^2 y)^2, 2 (x^{1/2} y - x^{3/2} y)^2, (1 - x y^2)^2
  c.triples.push_back({pt({3, 2}), pt({4, 2}), pt({2, 2}), half, 1, 1});
  c.triples.push_back({pt({2, 2}), pt({3, 2}), pt({1, 2}), 1, 2, 2});
  c.triples.push_back({pt({1, 2}), pt({2, 4}), pt({0, 0}), half, 1, 1});
  cert.circuits.push_back(c);
  return cert;
}

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

}  // namespace oracle
