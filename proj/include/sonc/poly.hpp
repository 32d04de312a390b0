#pragma once

#include <map>
#include <string>
#include <vector>

#include "sonc/rational.hpp"

namespace sonc {

using Exponent = std::vector<int>;

bool is_even(const Exponent& e);
RationalPoint to_point(const Exponent& e);
std::string to_string(const Exponent& e);

/// Sparse polynomial with exact rational coefficients. Zero coefficients are never stored.
class SparsePoly {
 public:
  SparsePoly() = default;
  explicit SparsePoly(int n) : n_(n) {}

  int nvars() const { return n_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Adds c to the coefficient of x^e.
  void add_term(const Exponent& e, const Rational& c);
  void set_term(const Exponent& e, const Rational& c);
  Rational coeff(const Exponent& e) const;
  int degree() const;

  bool operator==(const SparsePoly& other) const = default;

 private:
  void check(const Exponent& e) const;

  int n_ = 0;
  std::map<Exponent, Rational> terms_;
};

struct SupportPartition {
  std::vector<Exponent> lambda_set;  // even exponents with positive coefficient
  std::vector<Exponent> gamma_set;   // the rest of the support
};

SupportPartition support_partition(const SparsePoly& f);

/// Flips every non-square term to a negative coefficient of the same magnitude.
SparsePoly to_pn(const SparsePoly& f);

SparsePoly substitute_power(const SparsePoly& f, int r);

/// Trellis with an interior point and its barycentric weights.
struct Circuit {
  std::vector<Exponent> trellis;
  Exponent beta;
  std::vector<Rational> weights;
};

/// Exact circuit-number test for sum_i c_i x^{alpha_i} - d x^beta.
bool is_nonneg_circuit(const Circuit& c, const std::vector<Rational>& coeffs, const Rational& d);

/// Throws if the weights are not positive, do not sum to one, or do not reproduce beta.
void check_circuit(const Circuit& c);

SparsePoly parse_poly_json(const std::string& text);
SparsePoly read_poly_file(const std::string& path);
/// Canonical form: terms in lexicographic exponent order, coefficients as "p/q".
std::string poly_to_json(const SparsePoly& f, int indent = -1);
void write_poly_file(const SparsePoly& f, const std::string& path);
std::string poly_sha256(const SparsePoly& f);

double evaluate(const SparsePoly& f, const std::vector<double>& x);
/// sum |c| |x^e|, the magnitude against which evaluation error is judged.
double evaluate_abs(const SparsePoly& f, const std::vector<double>& x);

std::string sha256_hex(const std::string& data);

}  // namespace sonc
