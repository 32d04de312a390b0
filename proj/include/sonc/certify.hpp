#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sonc/plan.hpp"

namespace sonc {

/// Coefficients (a, b, c) of 2a x^v + b x^w - 2c x^u at the points u = (v + w) / 2.
struct ExactTriple {
  RationalPoint u, v, w;
  Rational a, b, c;
};

struct CertificateCircuit {
  Exponent beta;
  std::vector<Exponent> trellis;
  std::vector<ExactTriple> triples;
};

struct SobsCertificate {
  int n = 0;
  std::string poly_sha256;
  Rational xi;
  std::string mode = "pn-reduced";  // or "direct" when f is already a PN-polynomial
  std::vector<CertificateCircuit> circuits;
  std::vector<std::pair<Exponent, Rational>> passthrough;
};

/// Slot values indexed by global triple number.
struct SlotValues {
  std::vector<Rational> a, b, c;
};

/// Nearest multiple of 2^-k, where 2^-k is the largest power of two not exceeding delta_hat.
Rational round_to_rational(double x, double delta_hat);

/// Residual of every coefficient-matching row: sum_v 2a + sum_w b - sum_u 2c - (f - xi)_gamma.
std::vector<Rational> residuals(const SlotValues& s, const ConeTriplePlan& plan, const SparsePoly& f_pn,
                                const Rational& xi);

/// Spreads each row residual evenly over the slots of that row, which zeroes it exactly.
SlotValues project(const SlotValues& s, const ConeTriplePlan& plan, const SparsePoly& f_pn, const Rational& xi);

bool check_cone(const Rational& a, const Rational& b, const Rational& c);
bool check_cone(const ExactTriple& t);

/// Round-down of xi_socp - margin to a multiple of 10^-6.
Rational default_xi(double xi_socp, double margin);

enum class CertifyStatus { ok, boundary_failure, solver_failure, cover_failure };
std::string to_string(CertifyStatus s);

struct CertifyOptions {
  double delta_hat = 1e-5;
  double delta_tilde = 1e-8;
  bool odd_mode = false;
  std::optional<Rational> xi;  // zero when absent, unless auto_margin is set
  bool auto_margin = false;
  double margin = 1e-4;
  std::string dump_path;
};

struct CertifyResult {
  CertifyStatus status = CertifyStatus::solver_failure;
  std::string message;
  std::optional<SobsCertificate> certificate;
  Rational xi;
  std::optional<double> xi_socp;  // bound used for the margin, if computed
  SolveStatus solver_status = SolveStatus::optimal;
  int attempts = 0;
  std::size_t triples = 0;
  double seconds_cover = 0, seconds_mediated = 0, seconds_assemble = 0, seconds_solve = 0, seconds_certify = 0;
};

/// Round-and-project certification of to_pn(f) - xi.
CertifyResult exact_sobs(const SparsePoly& f, const CertifyOptions& opt = {});

/// Assembles the certificate from exact slot values that satisfy every row.
SobsCertificate make_certificate(const SparsePoly& f, const ConeTriplePlan& plan, const SlotValues& s,
                                 const Rational& xi);

enum class VerifyReason {
  ok,
  hash_mismatch,
  dimension_mismatch,
  malformed_triple,
  reconstruction_mismatch,
  cone_violation,
  passthrough_negative,
};
std::string to_string(VerifyReason r);

struct VerifyResult {
  bool accepted = false;
  VerifyReason reason = VerifyReason::ok;
  std::string detail;
};

/// Exact check of a certificate against f; uses nothing from the producer but the certificate.
VerifyResult verify_certificate(const SparsePoly& f, const SobsCertificate& cert);

std::string certificate_to_json(const SobsCertificate& cert, int indent = -1);
SobsCertificate certificate_from_json(const std::string& text);
SobsCertificate read_certificate_file(const std::string& path);
void write_certificate_file(const SobsCertificate& cert, const std::string& path);

/// Total bit count of all serialized numerators and denominators.
std::size_t bit_size(const SobsCertificate& cert);

}  // namespace sonc
