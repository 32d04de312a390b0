#include "sonc/generate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "sonc/cover.hpp"
#include "sonc/lp.hpp"
#include "sonc/mediated.hpp"

namespace sonc {

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Number of lattice points with all coordinates >= 1 and sum <= d - 1, capped.
double standard_interior_count(int n, int d) {
  if (d - 1 < n) return 0;
  double c = 1;
  for (int i = 1; i <= n; ++i) c = c * (d - 1 - n + i) / i;
  return c;
}

/// Uniform lattice point y >= 0 with sum(y) <= m, shifted by one in every coordinate.
Exponent random_standard_interior(Rng& rng, int n, int m) {
  std::vector<int> pool(m + n);
  for (int i = 0; i < m + n; ++i) pool[i] = i + 1;
  std::vector<int> pick;
  std::sample(pool.begin(), pool.end(), std::back_inserter(pick), n, rng);
  std::sort(pick.begin(), pick.end());
  Exponent e(n);
  int prev = 0;
  for (int i = 0; i < n; ++i) {
    e[i] = pick[i] - prev;
    prev = pick[i];
  }
  return e;
}

void enumerate_standard_interior(int n, int budget, Exponent& cur, int pos, std::vector<Exponent>& out) {
  if (pos == n) {
    out.push_back(cur);
    return;
  }
  for (int v = 1; v <= budget - (n - pos - 1); ++v) {
    cur[pos] = v;
    enumerate_standard_interior(n, budget - v, cur, pos + 1, out);
  }
}

/// Even exponent with coordinate sum exactly s (s even).
Exponent random_even_point(Rng& rng, int n, int s) {
  Exponent e(n, 0);
  for (int k = 0; k < s / 2; ++k) e[uniform_int(rng, 0, n - 1)] += 2;
  return e;
}

int affine_rank(const std::vector<Exponent>& pts) {
  if (pts.empty()) return 0;
  const std::size_t n = pts[0].size();
  std::vector<std::vector<Rational>> m;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Rational> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = pts[i][j] - pts[0][j];
    m.push_back(std::move(row));
  }
  int rank = 0;
  for (std::size_t col = 0; col < n && rank < static_cast<int>(m.size()); ++col) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[rank][col];
      for (std::size_t j = col; j < n; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// Random convex combination of the given points, rounded to the nearest lattice point.
Exponent random_inner_point(Rng& rng, const std::vector<Exponent>& pts) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> w(pts.size());
  double total = 0;
  for (auto& x : w) total += x = gamma(rng);
  const std::size_t n = pts[0].size();
  Exponent e(n);
  for (std::size_t j = 0; j < n; ++j) {
    double v = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) v += w[i] / total * pts[i][j];
    e[j] = static_cast<int>(std::lround(v));
  }
  return e;
}

bool in_convex_hull(const Exponent& g, const std::vector<Exponent>& pts) {
  const std::size_t n = g.size();
  LpProblem lp;
  lp.objective.assign(pts.size(), 0);
  lp.a.assign(n + 1, std::vector<Rational>(pts.size()));
  lp.rhs.resize(n + 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) lp.a[j][i] = pts[i][j];
    lp.a[n][i] = 1;
  }
  for (std::size_t j = 0; j < n; ++j) lp.rhs[j] = g[j];
  lp.rhs[n] = 1;
  return lp_solve_exact(lp).status == LpStatus::optimal;
}

bool strictly_inside_simplex(const Exponent& g, const std::vector<Exponent>& vertices) {
  std::vector<RationalPoint> tr;
  for (const auto& v : vertices) tr.push_back(to_point(v));
  auto w = barycentric(tr, to_point(g));
  return std::all_of(w.begin(), w.end(), [](const Rational& x) { return x > 0; });
}

struct Support {
  std::vector<Exponent> squares;
  std::vector<Exponent> inner;
};

bool pick_inner(Rng& rng, const Support& s, std::size_t count, int tries_per_point,
                const std::function<bool(const Exponent&)>& accept, const std::vector<Exponent>& sample_from,
                std::vector<Exponent>& out) {
  std::set<Exponent> taken(s.squares.begin(), s.squares.end());
  for (int attempt = 0; out.size() < count && attempt < tries_per_point * static_cast<int>(count); ++attempt) {
    std::vector<Exponent> base = sample_from;
    if (base.size() > s.squares[0].size() + 1) {
      std::shuffle(base.begin(), base.end(), rng);
      base.resize(s.squares[0].size() + 1);
    }
    Exponent g = random_inner_point(rng, base);
    if (taken.count(g) || !accept(g)) continue;
    taken.insert(g);
    out.push_back(g);
  }
  return out.size() == count;
}

std::optional<Support> standard_support(Rng& rng, const InstanceSpec& sp) {
  Support s;
  s.squares.push_back(Exponent(sp.n, 0));
  for (int i = 0; i < sp.n; ++i) {
    Exponent e(sp.n, 0);
    e[i] = sp.d;
    s.squares.push_back(e);
  }
  const std::size_t need = sp.t - sp.n - 1;
  const double count = standard_interior_count(sp.n, sp.d);
  if (count <= 4.0 * need) {
    std::vector<Exponent> all;
    Exponent cur(sp.n);
    enumerate_standard_interior(sp.n, sp.d - 1, cur, 0, all);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(need);
    s.inner = std::move(all);
    return s;
  }
  std::set<Exponent> taken;
  while (taken.size() < need) {
    Exponent e = random_standard_interior(rng, sp.n, sp.d - 1 - sp.n);
    if (taken.insert(e).second) s.inner.push_back(e);
  }
  return s;
}

/// Even point near the vertex d e_i (near 0 when i < 0): up to d/4 moves of two units.
Exponent perturbed_vertex(Rng& rng, int n, int d, int i) {
  Exponent e(n, 0);
  if (i >= 0) e[i] = d;
  const int moves = uniform_int(rng, 0, d / 4);
  for (int k = 0; k < moves; ++k) {
    int to = uniform_int(rng, 0, n - 1);
    if (i >= 0) {
      if (to == i || e[i] < 2) continue;
      e[i] -= 2;
    }
    e[to] += 2;
  }
  return e;
}

std::optional<Support> general_support(Rng& rng, const InstanceSpec& sp) {
  Support s;
  for (int i = -1; i < sp.n; ++i) s.squares.push_back(perturbed_vertex(rng, sp.n, sp.d, i));
  if (std::set<Exponent>(s.squares.begin(), s.squares.end()).size() != s.squares.size()) return std::nullopt;
  if (affine_rank(s.squares) < sp.n) return std::nullopt;
  const std::size_t need = sp.t - sp.n - 1;
  auto accept = [&](const Exponent& g) { return strictly_inside_simplex(g, s.squares); };
  if (!pick_inner(rng, s, need, 50, accept, s.squares, s.inner)) return std::nullopt;
  return s;
}

std::optional<Support> arbitrary_support(Rng& rng, const InstanceSpec& sp) {
  Support s;
  const int squares = sp.t - sp.l;
  std::set<Exponent> seen;
  s.squares.push_back(random_even_point(rng, sp.n, sp.d));
  seen.insert(s.squares.back());
  for (int guard = 0; static_cast<int>(s.squares.size()) < squares && guard < 100 * squares; ++guard) {
    Exponent e = random_even_point(rng, sp.n, 2 * uniform_int(rng, 0, sp.d / 2));
    if (seen.insert(e).second) s.squares.push_back(e);
  }
  if (static_cast<int>(s.squares.size()) < squares || affine_rank(s.squares) < sp.n) return std::nullopt;
  auto accept = [&](const Exponent& g) { return in_convex_hull(g, s.squares); };
  if (!pick_inner(rng, s, sp.l, 50, accept, s.squares, s.inner)) return std::nullopt;
  return s;
}

/// Inner coefficients below the capacity of the covering circuits, given square coefficients.
std::optional<std::map<Exponent, Rational>> interior_inner(Rng& rng, const std::map<Exponent, Rational>& squares,
                                                           const std::vector<Exponent>& inner) {
  std::vector<Exponent> lam;
  for (const auto& [e, c] : squares) lam.push_back(e);
  SimplexCoverResult cover = simplex_cover(lam, inner);
  std::map<Exponent, int> uses;
  for (const auto& c : cover.circuits)
    for (const auto& a : c.trellis) ++uses[a];
  std::map<Exponent, double> capacity;
  for (const auto& c : cover.circuits) {
    double log_theta = 0;
    for (std::size_t i = 0; i < c.trellis.size(); ++i) {
      double share = squares.at(c.trellis[i]).get_d() / uses[c.trellis[i]];
      double lambda = c.weights[i].get_d();
      log_theta += lambda * std::log(share / lambda);
    }
    capacity[c.beta] += std::exp(log_theta);
  }
  std::uniform_real_distribution<double> rho(0.3, 0.9);
  std::map<Exponent, Rational> out;
  const Integer grid = Integer(1) << 30;
  for (const auto& g : inner) {
    double mag = rho(rng) * capacity.at(g);
    Integer num;
    mpz_set_d(num.get_mpz_t(), std::floor(mag * grid.get_d()));
    if (num == 0) return std::nullopt;
    Rational c(num, grid);
    c.canonicalize();
    bool negative = is_even(g) || uniform_int(rng, 0, 1) == 1;
    out[g] = negative ? Rational(-c) : c;
  }
  return out;
}

}  // namespace

std::string to_string(InstanceClass c) {
  switch (c) {
    case InstanceClass::standard_simplex: return "standard-simplex";
    case InstanceClass::general_simplex: return "general-simplex";
    case InstanceClass::arbitrary_polytope: return "arbitrary-polytope";
  }
  return "unknown";
}

InstanceClass parse_instance_class(const std::string& s) {
  if (s == "standard-simplex" || s == "standard") return InstanceClass::standard_simplex;
  if (s == "general-simplex" || s == "general") return InstanceClass::general_simplex;
  if (s == "arbitrary-polytope" || s == "arbitrary") return InstanceClass::arbitrary_polytope;
  throw Error("unknown instance class '" + s + "'");
}

SparsePoly generate_instance(const InstanceSpec& sp) {
  if (sp.n < 1) throw Error("generator: n must be positive");
  if (sp.d < 2 || sp.d % 2 != 0) throw Error("generator: d must be even and positive");
  if (sp.t < sp.n + 2) throw Error("generator: t must be at least n + 2");
  if (sp.max_square_coef < 1 || sp.max_inner_coef < 1) throw Error("generator: coefficient ranges must be positive");
  switch (sp.cls) {
    case InstanceClass::standard_simplex:
      if (standard_interior_count(sp.n, sp.d) < sp.t - sp.n - 1)
        throw Error("generator: the standard simplex of degree " + std::to_string(sp.d) + " has fewer than " +
                    std::to_string(sp.t - sp.n - 1) + " interior lattice points");
      break;
    case InstanceClass::general_simplex: break;
    case InstanceClass::arbitrary_polytope:
      if (sp.l < 1) throw Error("generator: l must be positive");
      if (sp.t - sp.l < sp.n + 1) throw Error("generator: t - l must be at least n + 1");
      break;
  }

  Rng rng(sp.seed);
  for (int attempt = 0; attempt < sp.max_tries; ++attempt) {
    std::optional<Support> s;
    switch (sp.cls) {
      case InstanceClass::standard_simplex: s = standard_support(rng, sp); break;
      case InstanceClass::general_simplex: s = general_support(rng, sp); break;
      case InstanceClass::arbitrary_polytope: s = arbitrary_support(rng, sp); break;
    }
    if (!s) continue;

    std::map<Exponent, Rational> squares;
    for (const auto& e : s->squares) squares[e] = uniform_int(rng, 1, sp.max_square_coef);
    SparsePoly f(sp.n);
    if (sp.interior) {
      if (std::count(s->inner.begin(), s->inner.end(), Exponent(sp.n, 0))) continue;
      // the extra constant is part of the square terms before the cover is drawn
      squares[Exponent(sp.n, 0)] += 1;
      auto inner = interior_inner(rng, squares, s->inner);
      if (!inner) continue;
      for (const auto& [e, c] : *inner) f.add_term(e, c);
    } else {
      for (const auto& g : s->inner) {
        int c = uniform_int(rng, 1, sp.max_inner_coef);
        bool negative = is_even(g) || uniform_int(rng, 0, 1) == 1;
        f.add_term(g, negative ? -c : c);
      }
    }
    for (const auto& [e, c] : squares) f.add_term(e, c);
    return f;
  }
  throw Error("generator: no instance found after " + std::to_string(sp.max_tries) + " attempts");
}

}  // namespace sonc
