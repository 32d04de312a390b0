#include "sonc/cover.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "sonc/lp.hpp"

namespace sonc {

std::vector<Rational> sim_sel(const Exponent& beta, const std::vector<Exponent>& lambda_set, const Exponent& alpha0) {
  auto it = std::find(lambda_set.begin(), lambda_set.end(), alpha0);
  if (it == lambda_set.end()) throw Error("sim_sel: alpha0 not in the lambda set");
  const std::size_t n = beta.size();
  const std::size_t m = lambda_set.size();
  LpProblem lp;
  lp.objective.assign(m, 0);
  lp.objective[it - lambda_set.begin()] = 1;
  lp.a.assign(n + 1, std::vector<Rational>(m));
  lp.rhs.resize(n + 1);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) lp.a[i][j] = lambda_set[j][i];
    lp.a[n][j] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) lp.rhs[i] = beta[i];
  lp.rhs[n] = 1;
  auto res = lp_solve_exact(lp);
  if (res.status != LpStatus::optimal)
    throw Error("sim_sel: " + to_string(beta) + " is outside the convex hull of the square terms");
  return res.x;
}

namespace {

std::optional<Circuit> try_circuit(const Exponent& beta, const std::vector<Exponent>& lambda_set,
                                   const Exponent& alpha0) {
  auto lam = sim_sel(beta, lambda_set, alpha0);
  auto pos = std::find(lambda_set.begin(), lambda_set.end(), alpha0) - lambda_set.begin();
  if (lam[pos] == 0) return std::nullopt;
  Circuit c;
  c.beta = beta;
  for (std::size_t j = 0; j < lambda_set.size(); ++j) {
    if (lam[j] > 0) {
      c.trellis.push_back(lambda_set[j]);
      c.weights.push_back(lam[j]);
    }
  }
  return c;
}

// alpha0 is taken from U first, then from the rest of Lambda.
Circuit circuit_for(const Exponent& beta, const std::vector<Exponent>& lambda_set, const std::set<Exponent>& u) {
  for (const auto& a : u)
    if (auto c = try_circuit(beta, lambda_set, a)) return *c;
  for (const auto& a : lambda_set)
    if (!u.count(a))
      if (auto c = try_circuit(beta, lambda_set, a)) return *c;
  throw Error("simplex_cover: no trellis covers " + to_string(beta));
}

void consume(const Circuit& c, std::set<Exponent>& u, std::set<Exponent>& v) {
  for (const auto& a : c.trellis) u.erase(a);
  v.erase(c.beta);
}

}  // namespace

SimplexCoverResult simplex_cover(std::vector<Exponent> lambda_set, std::vector<Exponent> gamma_set) {
  std::sort(lambda_set.begin(), lambda_set.end());
  std::sort(gamma_set.begin(), gamma_set.end());
  SimplexCoverResult out;
  if (gamma_set.empty()) return out;
  if (lambda_set.empty()) throw Error("simplex_cover: no square terms");

  std::set<Exponent> u(lambda_set.begin(), lambda_set.end());
  std::set<Exponent> v(gamma_set.begin(), gamma_set.end());

  while (!u.empty() && !v.empty()) {
    Circuit c = circuit_for(*v.begin(), lambda_set, u);
    consume(c, u, v);
    out.circuits.push_back(std::move(c));
  }
  if (!v.empty()) {
    while (!v.empty()) {
      if (u.empty()) u.insert(lambda_set.begin(), lambda_set.end());
      Circuit c = circuit_for(*v.begin(), lambda_set, u);
      consume(c, u, v);
      out.circuits.push_back(std::move(c));
    }
  } else {
    // Drain U. A point of U that lies in no circuit with any beta stays uncovered.
    while (!u.empty()) {
      if (v.empty()) v.insert(gamma_set.begin(), gamma_set.end());
      std::vector<Exponent> betas(v.begin(), v.end());
      for (const auto& b : gamma_set)
        if (!v.count(b)) betas.push_back(b);
      std::optional<Circuit> found;
      for (const auto& a : u) {
        for (const auto& b : betas)
          if ((found = try_circuit(b, lambda_set, a))) break;
        if (found) break;
      }
      if (!found) break;
      consume(*found, u, v);
      out.circuits.push_back(std::move(*found));
    }
  }
  return out;
}

}  // namespace sonc
