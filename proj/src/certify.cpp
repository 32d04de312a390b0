#include "sonc/certify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace sonc {

using nlohmann::json;

namespace {

// A breakdown iterate this close to feasible is still rounded; the exact cone check decides.
constexpr double kUsableResidual = 1e-6;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Integer floor_integer(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

}  // namespace

Rational round_to_rational(double x, double delta_hat) {
  if (!std::isfinite(x)) throw Error("round_to_rational: non-finite input");
  if (!(delta_hat > 0)) throw Error("round_to_rational: precision must be positive");
  int k = 0;
  while (std::ldexp(1.0, -k) > delta_hat) ++k;
  double scaled = std::round(std::ldexp(x, k));
  Integer num;
  mpz_set_d(num.get_mpz_t(), scaled);
  Integer den = Integer(1) << k;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::vector<Rational> residuals(const SlotValues& s, const ConeTriplePlan& plan, const SparsePoly& f_pn,
                                const Rational& xi) {
  std::vector<Rational> r = plan_rhs(plan, f_pn, xi);
  for (auto& v : r) v = -v;
  std::size_t id = 0;
  for (const auto& t : plan.flat_triples()) {
    r[t.v] += 2 * s.a[id];
    r[t.w] += s.b[id];
    r[t.u] -= 2 * s.c[id];
    ++id;
  }
  return r;
}

SlotValues project(const SlotValues& s, const ConeTriplePlan& plan, const SparsePoly& f_pn, const Rational& xi) {
  auto r = residuals(s, plan, f_pn, xi);
  std::vector<unsigned long> eta(plan.points.size(), 0);
  auto triples = plan.flat_triples();
  for (const auto& t : triples) {
    ++eta[t.u];
    ++eta[t.v];
    ++eta[t.w];
  }
  SlotValues out = s;
  for (std::size_t id = 0; id < triples.size(); ++id) {
    const auto& t = triples[id];
    if (r[t.v] != 0) out.a[id] -= r[t.v] / (2 * eta[t.v]);
    if (r[t.w] != 0) out.b[id] -= r[t.w] / eta[t.w];
    if (r[t.u] != 0) out.c[id] += r[t.u] / (2 * eta[t.u]);
  }
  return out;
}

bool check_cone(const Rational& a, const Rational& b, const Rational& c) {
  return a >= 0 && b >= 0 && 2 * a * b >= c * c;
}

bool check_cone(const ExactTriple& t) { return check_cone(t.a, t.b, t.c); }

Rational default_xi(double xi_socp, double margin) {
  Rational v = round_to_rational(xi_socp - margin, std::ldexp(1.0, -60));
  return make_rational(floor_integer(v * 1000000), 1000000);
}

std::string to_string(CertifyStatus s) {
  switch (s) {
    case CertifyStatus::ok: return "ok";
    case CertifyStatus::boundary_failure: return "boundary-failure";
    case CertifyStatus::solver_failure: return "solver-failure";
    case CertifyStatus::cover_failure: return "cover-failure";
  }
  return "unknown";
}

std::string to_string(VerifyReason r) {
  switch (r) {
    case VerifyReason::ok: return "ok";
    case VerifyReason::hash_mismatch: return "hash mismatch";
    case VerifyReason::dimension_mismatch: return "dimension mismatch";
    case VerifyReason::malformed_triple: return "malformed triple";
    case VerifyReason::reconstruction_mismatch: return "reconstruction mismatch";
    case VerifyReason::cone_violation: return "cone violation";
    case VerifyReason::passthrough_negative: return "passthrough negative";
  }
  return "unknown";
}

SobsCertificate make_certificate(const SparsePoly& f, const ConeTriplePlan& plan, const SlotValues& s,
                                 const Rational& xi) {
  SobsCertificate cert;
  SparsePoly g = to_pn(f);
  cert.n = f.nvars();
  cert.poly_sha256 = poly_sha256(f);
  cert.xi = xi;
  cert.mode = g == f ? "direct" : "pn-reduced";
  std::size_t id = 0;
  for (std::size_t k = 0; k < plan.triples.size(); ++k) {
    CertificateCircuit cc;
    cc.beta = plan.circuits[k].beta;
    cc.trellis = plan.circuits[k].trellis;
    for (const auto& t : plan.triples[k]) {
      cc.triples.push_back({plan.points[t.u], plan.points[t.v], plan.points[t.w], s.a[id], s.b[id], s.c[id]});
      ++id;
    }
    cert.circuits.push_back(std::move(cc));
  }
  g.add_term(Exponent(f.nvars(), 0), -xi);
  for (const auto& [e, c] : g.terms())
    if (!plan.find_point(to_point(e))) cert.passthrough.emplace_back(e, c);
  return cert;
}

CertifyResult exact_sobs(const SparsePoly& f, const CertifyOptions& opt) {
  CertifyResult res;
  SparsePoly g = to_pn(f);
  Rational xi = opt.xi.value_or(Rational(0));
  if (opt.auto_margin) {
    BoundResult b;
    try {
      b = lower_bound(f, opt.delta_tilde);
    } catch (const Error& e) {
      res.status = CertifyStatus::cover_failure;
      res.message = e.what();
      return res;
    }
    res.seconds_cover += b.seconds_cover;
    res.seconds_mediated += b.seconds_mediated;
    res.seconds_assemble += b.seconds_assemble;
    res.seconds_solve += b.seconds_solve;
    if (!has_solution(b.status)) {
      res.status = CertifyStatus::solver_failure;
      res.solver_status = b.status;
      res.message = "bound computation: solver " + to_string(b.status);
      return res;
    }
    res.xi_socp = b.xi;
    xi = default_xi(b.xi, opt.margin);
  }
  res.xi = xi;

  SparsePoly shifted = g;
  shifted.add_term(Exponent(f.nvars(), 0), -xi);
  ConeTriplePlan plan;
  try {
    auto t0 = std::chrono::steady_clock::now();
    auto sp = support_partition(shifted);
    SimplexCoverResult cover;
    if (!sp.gamma_set.empty()) cover = simplex_cover(sp.lambda_set, sp.gamma_set);
    res.seconds_cover += seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    plan = build_plan(g, cover, opt.odd_mode);
    res.seconds_mediated += seconds_since(t0);
  } catch (const Error& e) {
    res.status = CertifyStatus::cover_failure;
    res.message = e.what();
    return res;
  }
  res.triples = plan.triple_count();

  auto t0 = std::chrono::steady_clock::now();
  SocpProblem prob;
  try {
    prob = assemble(plan, g, SocpMode::feasibility, xi);
  } catch (const Error& e) {
    res.status = CertifyStatus::cover_failure;
    res.message = e.what();
    return res;
  }
  res.seconds_assemble += seconds_since(t0);
  if (!opt.dump_path.empty()) {
    std::ofstream out(opt.dump_path);
    if (!out) throw Error("cannot write " + opt.dump_path);
    out << socp_to_json(prob) << "\n";
  }

  double delta_hat = opt.delta_hat, delta_tilde = opt.delta_tilde;
  for (int attempt = 1; attempt <= 2; ++attempt) {
    res.attempts = attempt;
    t0 = std::chrono::steady_clock::now();
    SocpSolution sol = solve(prob, delta_tilde);
    res.seconds_solve += seconds_since(t0);
    res.solver_status = sol.status;
    bool usable = has_solution(sol.status) || sol.primal_residual <= kUsableResidual;
    for (std::size_t i = 0; i < prob.triples && usable; ++i)
      usable = std::isfinite(sol.a[i]) && std::isfinite(sol.b[i]) && std::isfinite(sol.c[i]);
    if (!usable || sol.status == SolveStatus::infeasible || sol.status == SolveStatus::unbounded) {
      res.status = CertifyStatus::solver_failure;
      res.message = "solver " + to_string(sol.status);
      return res;
    }

    t0 = std::chrono::steady_clock::now();
    SlotValues s;
    for (std::size_t i = 0; i < prob.triples; ++i) {
      s.a.push_back(round_to_rational(sol.a[i], delta_hat));
      s.b.push_back(round_to_rational(sol.b[i], delta_hat));
      s.c.push_back(round_to_rational(sol.c[i], delta_hat));
    }
    s = project(s, plan, g, xi);
    bool inside = true;
    for (std::size_t i = 0; i < prob.triples && inside; ++i) inside = check_cone(s.a[i], s.b[i], s.c[i]);
    res.seconds_certify += seconds_since(t0);
    if (inside) {
      res.certificate = make_certificate(f, plan, s, xi);
      res.status = CertifyStatus::ok;
      return res;
    }
    delta_hat /= 1024;
    delta_tilde /= 100;
  }
  res.status = CertifyStatus::boundary_failure;
  res.message = "not strictly certifiable at this precision";
  return res;
}

VerifyResult verify_certificate(const SparsePoly& f, const SobsCertificate& cert) {
  auto reject = [](VerifyReason r, std::string detail) { return VerifyResult{false, r, std::move(detail)}; };
  if (cert.poly_sha256 != poly_sha256(f)) return reject(VerifyReason::hash_mismatch, "certificate is for another polynomial");
  if (cert.n != f.nvars()) return reject(VerifyReason::dimension_mismatch, "variable count differs");
  SparsePoly g = to_pn(f);
  if (cert.mode == "direct" && !(g == f))
    return reject(VerifyReason::malformed_triple, "direct mode on a polynomial that is not a PN-polynomial");

  std::map<RationalPoint, Rational> sum;
  std::size_t count = 0;
  for (const auto& cc : cert.circuits) {
    for (const auto& t : cc.triples) {
      ++count;
      const std::size_t n = static_cast<std::size_t>(cert.n);
      if (t.u.size() != n || t.v.size() != n || t.w.size() != n)
        return reject(VerifyReason::malformed_triple, "triple " + std::to_string(count) + " has wrong dimension");
      if (t.v == t.w || midpoint(t.v, t.w) != t.u)
        return reject(VerifyReason::malformed_triple, "triple " + std::to_string(count) + " is not a midpoint triple");
      for (const auto* p : {&t.u, &t.v, &t.w})
        for (const auto& c : *p)
          if (c < 0) return reject(VerifyReason::malformed_triple, "negative exponent in triple " + std::to_string(count));
      sum[t.v] += 2 * t.a;
      sum[t.w] += t.b;
      sum[t.u] -= 2 * t.c;
    }
  }
  for (const auto& [e, c] : cert.passthrough) {
    if (static_cast<int>(e.size()) != cert.n) return reject(VerifyReason::malformed_triple, "passthrough dimension");
    sum[to_point(e)] += c;
  }

  g.add_term(Exponent(f.nvars(), 0), -cert.xi);
  std::map<RationalPoint, Rational> target;
  for (const auto& [e, c] : g.terms()) target[to_point(e)] = c;
  for (auto it = sum.begin(); it != sum.end();) it = it->second == 0 ? sum.erase(it) : std::next(it);
  if (sum != target) {
    for (const auto& [p, c] : target) {
      auto it = sum.find(p);
      if (it == sum.end() || it->second != c)
        return reject(VerifyReason::reconstruction_mismatch, "coefficient at " + to_string(p) + " differs");
    }
    for (const auto& [p, c] : sum)
      if (!target.count(p)) return reject(VerifyReason::reconstruction_mismatch, "extra term at " + to_string(p));
  }

  count = 0;
  for (const auto& cc : cert.circuits)
    for (const auto& t : cc.triples) {
      ++count;
      if (!check_cone(t)) return reject(VerifyReason::cone_violation, "triple " + std::to_string(count));
    }
  for (const auto& [e, c] : cert.passthrough)
    if (c < 0) return reject(VerifyReason::passthrough_negative, "at " + to_string(e));
  return {true, VerifyReason::ok, ""};
}

namespace {

json rational_pair(const Rational& r) { return json::array({r.get_num().get_str(), r.get_den().get_str()}); }

json point_json(const RationalPoint& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(rational_pair(c));
  return a;
}

Rational rational_from_pair(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("certificate: coordinate must be a [num, den] pair");
  Integer num(j[0].get<std::string>(), 10), den(j[1].get<std::string>(), 10);
  if (den <= 0) throw Error("certificate: nonpositive denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

RationalPoint point_from_json(const json& j) {
  RationalPoint p;
  for (const auto& c : j) p.push_back(rational_from_pair(c));
  return p;
}

std::size_t bits(const Rational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

}  // namespace

std::string certificate_to_json(const SobsCertificate& cert, int indent) {
  json circuits = json::array();
  for (const auto& cc : cert.circuits) {
    json triples = json::array();
    for (const auto& t : cc.triples)
      triples.push_back({{"u", point_json(t.u)},
                         {"v", point_json(t.v)},
                         {"w", point_json(t.w)},
                         {"a", to_string(t.a)},
                         {"b", to_string(t.b)},
                         {"c", to_string(t.c)}});
    circuits.push_back({{"beta", cc.beta}, {"trellis", cc.trellis}, {"triples", triples}});
  }
  json pass = json::array();
  for (const auto& [e, c] : cert.passthrough) pass.push_back({{"exp", e}, {"coef", to_string(c)}});
  json j = {{"n", cert.n},
            {"xi", to_string(cert.xi)},
            {"poly_sha256", cert.poly_sha256},
            {"mode", cert.mode},
            {"circuits", circuits},
            {"passthrough", pass}};
  return j.dump(indent);
}

SobsCertificate certificate_from_json(const std::string& text) {
  SobsCertificate cert;
  try {
    json j = json::parse(text);
    cert.n = j.at("n").get<int>();
    cert.xi = parse_rational(j.at("xi").get<std::string>());
    cert.poly_sha256 = j.at("poly_sha256").get<std::string>();
    cert.mode = j.value("mode", std::string("pn-reduced"));
    for (const auto& cj : j.at("circuits")) {
      CertificateCircuit cc;
      if (cj.contains("beta")) cc.beta = cj.at("beta").get<Exponent>();
      if (cj.contains("trellis")) cc.trellis = cj.at("trellis").get<std::vector<Exponent>>();
      for (const auto& tj : cj.at("triples"))
        cc.triples.push_back({point_from_json(tj.at("u")), point_from_json(tj.at("v")), point_from_json(tj.at("w")),
                              parse_rational(tj.at("a").get<std::string>()),
                              parse_rational(tj.at("b").get<std::string>()),
                              parse_rational(tj.at("c").get<std::string>())});
      cert.circuits.push_back(std::move(cc));
    }
    for (const auto& pj : j.at("passthrough"))
      cert.passthrough.emplace_back(pj.at("exp").get<Exponent>(), parse_rational(pj.at("coef").get<std::string>()));
  } catch (const json::exception& e) {
    throw Error(std::string("certificate JSON: ") + e.what());
  }
  return cert;
}

SobsCertificate read_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return certificate_from_json(ss.str());
}

void write_certificate_file(const SobsCertificate& cert, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << certificate_to_json(cert, 1) << "\n";
}

std::size_t bit_size(const SobsCertificate& cert) {
  std::size_t total = bits(cert.xi);
  for (const auto& cc : cert.circuits)
    for (const auto& t : cc.triples) {
      for (const auto* p : {&t.u, &t.v, &t.w})
        for (const auto& c : *p) total += bits(c);
      total += bits(t.a) + bits(t.b) + bits(t.c);
    }
  for (const auto& [e, c] : cert.passthrough) total += bits(c);
  return total;
}

}  // namespace sonc
