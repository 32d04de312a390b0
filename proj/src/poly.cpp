#include "sonc/poly.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sonc {

using nlohmann::json;

bool is_even(const Exponent& e) {
  return std::all_of(e.begin(), e.end(), [](int v) { return v % 2 == 0; });
}

RationalPoint to_point(const Exponent& e) {
  RationalPoint p;
  p.reserve(e.size());
  for (int v : e) p.emplace_back(v);
  return p;
}

std::string to_string(const Exponent& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + ")";
}

void SparsePoly::check(const Exponent& e) const {
  if (static_cast<int>(e.size()) != n_)
    throw Error("exponent " + to_string(e) + " has length " + std::to_string(e.size()) + ", expected " +
                std::to_string(n_));
  for (int v : e)
    if (v < 0) throw Error("negative exponent " + to_string(e));
}

void SparsePoly::add_term(const Exponent& e, const Rational& c) {
  check(e);
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void SparsePoly::set_term(const Exponent& e, const Rational& c) {
  check(e);
  if (c == 0)
    terms_.erase(e);
  else
    terms_[e] = c;
}

Rational SparsePoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int SparsePoly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

SupportPartition support_partition(const SparsePoly& f) {
  SupportPartition sp;
  for (const auto& [e, c] : f.terms()) {
    if (is_even(e) && c > 0)
      sp.lambda_set.push_back(e);
    else
      sp.gamma_set.push_back(e);
  }
  return sp;
}

SparsePoly to_pn(const SparsePoly& f) {
  SparsePoly g(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (is_even(e) && c > 0)
      g.set_term(e, c);
    else
      g.set_term(e, -abs(c));
  }
  return g;
}

SparsePoly substitute_power(const SparsePoly& f, int r) {
  if (r < 1) throw Error("substitute_power needs r >= 1");
  SparsePoly g(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    Exponent s = e;
    for (int& v : s) v *= r;
    g.set_term(s, c);
  }
  return g;
}

void check_circuit(const Circuit& c) {
  if (c.trellis.size() != c.weights.size()) throw Error("circuit: weights and trellis differ in length");
  if (c.trellis.empty()) throw Error("circuit: empty trellis");
  Rational sum = 0;
  RationalPoint acc(c.beta.size());
  for (std::size_t i = 0; i < c.trellis.size(); ++i) {
    if (c.weights[i] <= 0) throw Error("circuit: nonpositive weight");
    if (!is_even(c.trellis[i])) throw Error("circuit: odd trellis point " + to_string(c.trellis[i]));
    sum += c.weights[i];
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += c.weights[i] * c.trellis[i][j];
  }
  if (sum != 1) throw Error("circuit: weights do not sum to one");
  if (acc != to_point(c.beta)) throw Error("circuit: weights do not reproduce beta");
}

bool is_nonneg_circuit(const Circuit& c, const std::vector<Rational>& coeffs, const Rational& d) {
  if (coeffs.size() != c.trellis.size() || c.weights.size() != c.trellis.size())
    throw Error("is_nonneg_circuit: mismatched lengths");
  for (const auto& v : coeffs)
    if (v <= 0) throw Error("is_nonneg_circuit: coefficients must be positive");
  Rational rhs_base = is_even(c.beta) ? d : abs(d);
  if (rhs_base <= 0) return true;

  Integer p = 1;
  for (const auto& w : c.weights) mpz_lcm(p.get_mpz_t(), p.get_mpz_t(), w.get_den_mpz_t());
  if (p > Integer(1) << 32) throw Error("is_nonneg_circuit: common denominator exceeds 2^32");
  unsigned long pu = p.get_ui();

  // prod (c_i p / q_i)^{q_i} >= d^p, compared as cross-multiplied integers
  Integer lhs_num = 1, lhs_den = 1;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Rational qi = c.weights[i] * p;
    Rational base = coeffs[i] * p / qi;
    unsigned long e = qi.get_num().get_ui();
    Integer t;
    mpz_pow_ui(t.get_mpz_t(), base.get_num_mpz_t(), e);
    lhs_num *= t;
    mpz_pow_ui(t.get_mpz_t(), base.get_den_mpz_t(), e);
    lhs_den *= t;
  }
  Integer rn, rd;
  mpz_pow_ui(rn.get_mpz_t(), rhs_base.get_num_mpz_t(), pu);
  mpz_pow_ui(rd.get_mpz_t(), rhs_base.get_den_mpz_t(), pu);
  return lhs_num * rd >= rn * lhs_den;
}

namespace {

Rational coef_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw Error("coefficient must be a string or a number");
}

}  // namespace

SparsePoly parse_poly_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("polynomial JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("terms")) throw Error("polynomial JSON needs 'n' and 'terms'");
  int n = j.at("n").get<int>();
  if (n < 1) throw Error("polynomial JSON: n must be positive");
  SparsePoly f(n);
  std::set<Exponent> seen;
  for (const auto& t : j.at("terms")) {
    Exponent e = t.at("exp").get<Exponent>();
    if (!seen.insert(e).second) throw Error("polynomial JSON: duplicate exponent " + to_string(e));
    f.set_term(e, coef_from_json(t.at("coef")));
  }
  return f;
}

SparsePoly read_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_poly_json(ss.str());
}

std::string poly_to_json(const SparsePoly& f, int indent) {
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", e}, {"coef", to_string(c)}});
  json j = {{"n", f.nvars()}, {"terms", terms}};
  return j.dump(indent);
}

void write_poly_file(const SparsePoly& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << poly_to_json(f, 1) << "\n";
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string poly_sha256(const SparsePoly& f) { return sha256_hex(poly_to_json(f)); }

double evaluate(const SparsePoly& f, const std::vector<double>& x) {
  long double s = 0;
  for (const auto& [e, c] : f.terms()) {
    long double m = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(static_cast<long double>(x[i]), e[i]);
    s += m;
  }
  return static_cast<double>(s);
}

double evaluate_abs(const SparsePoly& f, const std::vector<double>& x) {
  long double s = 0;
  for (const auto& [e, c] : f.terms()) {
    long double m = std::fabs(c.get_d());
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(std::fabs(static_cast<long double>(x[i])), e[i]);
    s += m;
  }
  return static_cast<double>(s);
}

}  // namespace sonc
