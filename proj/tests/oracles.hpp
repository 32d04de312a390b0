#pragma once

// Test-side reference computations. Nothing here calls into the code under test except for
// plain data types and the polynomial container.

#include <map>
#include <random>
#include <vector>

#include "sonc/certify.hpp"

namespace oracle {

using sonc::Integer;
using sonc::Rational;
using sonc::RationalPoint;

using PointPoly = std::map<RationalPoint, Rational>;

/// Term-by-term expansion of sum 2a x^v + b x^w - 2c x^u, zero coefficients dropped.
PointPoly expand(const std::vector<sonc::ExactTriple>& triples);

/// Coefficients of the PN-polynomial of f minus xi, with integer exponents lifted to points.
PointPoly pn_minus(const sonc::SparsePoly& f, const Rational& xi);

void add_to(PointPoly& p, const RationalPoint& at, const Rational& c);

/// a >= 0, b >= 0, 2ab - c^2 >= 0
bool in_cone(const Rational& a, const Rational& b, const Rational& c);

/// Smallest k with 2^k >= p.
int ceil_log2(long p);

/// True iff every interior value is the average of two distinct members of {0, p} plus interior.
bool mediated(long p, const std::vector<long>& interior);

/// Number of distinct u-points returned by med_seq, the endpoints 0 and p not counted.
std::size_t med_seq_size(long p, long q);

/// Average med_seq_size over 0 < q < p with gcd(p, q) = 1.
Rational average_med_seq_size(long p);

/// (1 + n d^2)^(n + 1)
Integer denominator_bound(int n, int d);

/// t n ((n + 1) log2(1 + n d^2) + 3)^2 / 8
double triple_bound(int t, int n, int d);

/// Naive evaluation in long double.
long double evaluate(const sonc::SparsePoly& f, const std::vector<double>& x);
long double magnitude(const sonc::SparsePoly& f, const std::vector<double>& x);

sonc::SparsePoly motzkin();
sonc::SparsePoly quadrinomial();     // 1 + x^4 + y^4 - x y^2 - x^2 y + 5 x y
sonc::SparsePoly square_cover_poly();  // 50 x^4 y^4 + x^4 + 3 y^4 + 800 - 100 x y^2 - 100 x^2 y

/// Three-square Motzkin decomposition (1 - x y^2)^2 + 2 (x^{1/2} y - x^{3/2} y)^2 + (x y - x^2 y)^2
/// in triple form over the trellis (4,2), (2,4), (0,0).
sonc::SobsCertificate motzkin_golden_certificate();

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den);

}  // namespace oracle
