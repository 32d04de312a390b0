#include "sonc/plan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "json.hpp"

namespace sonc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool is_lattice(const RationalPoint& p) {
  return std::all_of(p.begin(), p.end(), [](const Rational& c) { return is_integer(c); });
}

Exponent to_exponent(const RationalPoint& p) {
  Exponent e;
  for (const auto& c : p) e.push_back(static_cast<int>(c.get_num().get_si()));
  return e;
}

}  // namespace

std::size_t ConeTriplePlan::triple_count() const {
  std::size_t s = 0;
  for (const auto& t : triples) s += t.size();
  return s;
}

std::vector<PlanTriple> ConeTriplePlan::flat_triples() const {
  std::vector<PlanTriple> out;
  for (const auto& t : triples) out.insert(out.end(), t.begin(), t.end());
  return out;
}

std::optional<std::size_t> ConeTriplePlan::find_point(const RationalPoint& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ConeTriplePlan::point_index(const RationalPoint& p) const {
  auto i = find_point(p);
  if (!i) throw Error("plan: point " + to_string(p) + " is not indexed");
  return *i;
}

std::vector<std::vector<Slot>> ConeTriplePlan::slots() const {
  std::vector<std::vector<Slot>> s(points.size());
  std::size_t id = 0;
  for (const auto& circuit : triples) {
    for (const auto& t : circuit) {
      s[t.v].push_back({id, Role::a});
      s[t.w].push_back({id, Role::b});
      s[t.u].push_back({id, Role::c});
      ++id;
    }
  }
  return s;
}

Integer ConeTriplePlan::max_denominator() const {
  Integer d = 1;
  for (const auto& p : points)
    for (const auto& c : p) d = std::max(d, Integer(c.get_den()));
  return d;
}

ConeTriplePlan build_plan(const SparsePoly& f_pn, const SimplexCoverResult& cover, bool odd_mode) {
  ConeTriplePlan plan;
  plan.n = f_pn.nvars();
  plan.circuits = cover.circuits;
  const std::size_t k = cover.circuits.size();
  std::vector<MediatedSet> sets(k);
  parallel_for(k, [&](std::size_t i) {
    const Circuit& c = cover.circuits[i];
    std::vector<RationalPoint> trellis;
    for (const auto& a : c.trellis) trellis.push_back(to_point(a));
    sets[i] = odd_mode ? med_set_odd(trellis, to_point(c.beta)) : med_set(trellis, to_point(c.beta));
  });

  std::set<RationalPoint> all;
  for (const auto& m : sets) {
    for (const auto& a : m.anchors) all.insert(a);
    for (const auto& t : m.triples) {
      all.insert(t.u);
      all.insert(t.v);
      all.insert(t.w);
    }
  }
  plan.points.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < plan.points.size(); ++i) plan.index_.emplace(plan.points[i], i);
  plan.triples.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    for (const auto& t : sets[i].triples)
      plan.triples[i].push_back({plan.index_.at(t.u), plan.index_.at(t.v), plan.index_.at(t.w)});

  for (const auto& a : support_partition(f_pn).lambda_set)
    if (!plan.index_.count(to_point(a))) plan.passthrough.push_back(a);
  return plan;
}

std::vector<Rational> plan_rhs(const ConeTriplePlan& plan, const SparsePoly& f_pn, const Rational& xi) {
  SparsePoly g = f_pn;
  g.add_term(Exponent(plan.n, 0), -xi);
  for (const auto& [e, coef] : g.terms()) {
    if (plan.find_point(to_point(e))) continue;
    if (!is_even(e) || coef < 0)
      throw Error("term " + to_string(e) + " with coefficient " + to_string(coef) +
                  " lies outside every mediated set and is not a monomial square");
  }
  std::vector<Rational> rhs(plan.points.size());
  for (std::size_t i = 0; i < plan.points.size(); ++i)
    if (is_lattice(plan.points[i])) rhs[i] = g.coeff(to_exponent(plan.points[i]));
  return rhs;
}

SupportPartition bound_support(const SparsePoly& f_pn) {
  auto sp = support_partition(f_pn);
  Exponent zero(f_pn.nvars(), 0);
  if (std::find(sp.lambda_set.begin(), sp.lambda_set.end(), zero) == sp.lambda_set.end() &&
      std::find(sp.gamma_set.begin(), sp.gamma_set.end(), zero) == sp.gamma_set.end())
    sp.lambda_set.insert(sp.lambda_set.begin(), zero);
  return sp;
}

SocpProblem assemble(const ConeTriplePlan& plan, const SparsePoly& f_pn, SocpMode mode, const Rational& xi) {
  SocpProblem p;
  p.mode = mode;
  p.triples = plan.triple_count();
  const Exponent zero(plan.n, 0);
  const Rational f0 = f_pn.coeff(zero);
  std::vector<Rational> rhs = plan_rhs(plan, f_pn, mode == SocpMode::bound ? f0 : xi);
  auto zero_point = plan.find_point(to_point(zero));

  std::vector<std::ptrdiff_t> row_of(plan.points.size(), -1);
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    if (mode == SocpMode::bound && zero_point && *zero_point == i) continue;
    row_of[i] = static_cast<std::ptrdiff_t>(p.row_point.size());
    p.row_point.push_back(i);
  }
  double scale = 0;
  for (auto i : p.row_point) scale = std::max(scale, std::fabs(rhs[i].get_d()));
  if (scale == 0) scale = 1;
  p.scale = scale;
  for (auto i : p.row_point) p.rhs.push_back(rhs[i].get_d() / scale);

  p.objective.assign(3 * p.triples, 0.0);
  p.xi_offset = mode == SocpMode::bound ? f0.get_d() : 0.0;
  auto add = [&](std::size_t point, std::size_t col, double v) {
    if (row_of[point] >= 0)
      p.a.push_back({static_cast<std::size_t>(row_of[point]), col, v});
    else
      p.objective[col] += v;
  };
  std::size_t id = 0;
  for (const auto& t : plan.flat_triples()) {
    add(t.v, 3 * id, 2.0);
    add(t.w, 3 * id + 1, 1.0);
    add(t.u, 3 * id + 2, -2.0);
    ++id;
  }
  return p;
}

SocpSolution solve(const SocpProblem& p, double tolerance, const ConicSolver& solver) {
  SocpSolution sol;
  if (p.triples == 0) {
    bool consistent = std::all_of(p.rhs.begin(), p.rhs.end(), [](double v) { return v == 0; });
    sol.status = consistent ? SolveStatus::optimal : SolveStatus::infeasible;
    sol.xi = p.xi_offset;
    return sol;
  }
  // (a, b, c) = ((x0 + x1)/sqrt2, (x0 - x1)/sqrt2, x2) maps Q^3 onto K
  const double r = 1 / std::sqrt(2.0);
  ConicProblem cp;
  cp.rows = p.row_point.size();
  cp.cones = p.triples;
  cp.b = p.rhs;
  cp.c.assign(3 * p.triples, 0.0);
  for (const auto& e : p.a) {
    std::size_t base = e.col / 3 * 3;
    switch (e.col % 3) {
      case 0:
        cp.a.push_back({e.row, base, e.value * r});
        cp.a.push_back({e.row, base + 1, e.value * r});
        break;
      case 1:
        cp.a.push_back({e.row, base, e.value * r});
        cp.a.push_back({e.row, base + 1, -e.value * r});
        break;
      default:
        cp.a.push_back({e.row, base + 2, e.value});
    }
  }
  for (std::size_t i = 0; i < p.triples; ++i) {
    cp.c[3 * i] = (p.objective[3 * i] + p.objective[3 * i + 1]) * r;
    cp.c[3 * i + 1] = (p.objective[3 * i] - p.objective[3 * i + 1]) * r;
    cp.c[3 * i + 2] = p.objective[3 * i + 2];
  }
  ConicResult cr = solver.solve(cp, tolerance);
  sol.status = cr.status;
  sol.iterations = cr.iterations;
  sol.primal_residual = cr.primal_residual;
  sol.dual_residual = cr.dual_residual;
  sol.gap = cr.gap;
  sol.a.resize(p.triples);
  sol.b.resize(p.triples);
  sol.c.resize(p.triples);
  double obj = 0;
  for (std::size_t i = 0; i < p.triples; ++i) {
    double x0 = cr.x[3 * i], x1 = cr.x[3 * i + 1], x2 = cr.x[3 * i + 2];
    sol.a[i] = (x0 + x1) * r * p.scale;
    sol.b[i] = (x0 - x1) * r * p.scale;
    sol.c[i] = x2 * p.scale;
    obj += p.objective[3 * i] * sol.a[i] + p.objective[3 * i + 1] * sol.b[i] + p.objective[3 * i + 2] * sol.c[i];
  }
  sol.xi = p.xi_offset - obj;
  return sol;
}

std::string socp_to_json(const SocpProblem& p) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : p.a) entries.push_back({e.row, e.col, e.value});
  nlohmann::json j = {
      {"format", "minimize objective.x subject to A x = rhs; x = (a_i, b_i, c_i) per cone, 2 a b >= c^2, a, b >= 0"},
      {"mode", p.mode == SocpMode::bound ? "bound" : "feasibility"},
      {"rows", p.row_point.size()},
      {"cols", 3 * p.triples},
      {"cones", {{"rotated3", p.triples}}},
      {"a", entries},
      {"rhs", p.rhs},
      {"objective", p.objective},
      {"scale", p.scale},
      {"xi_offset", p.xi_offset},
  };
  return j.dump();
}

BoundResult lower_bound(const SparsePoly& f, double tolerance, const std::string& dump_path) {
  BoundResult res;
  SparsePoly g = to_pn(f);
  auto t0 = std::chrono::steady_clock::now();
  auto sp = bound_support(g);
  SimplexCoverResult cover;
  if (!sp.gamma_set.empty()) cover = simplex_cover(sp.lambda_set, sp.gamma_set);
  res.seconds_cover = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  res.plan = build_plan(g, cover, false);
  res.seconds_mediated = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  SocpProblem p = assemble(res.plan, g, SocpMode::bound);
  res.seconds_assemble = seconds_since(t0);
  if (!dump_path.empty()) {
    std::ofstream out(dump_path);
    if (!out) throw Error("cannot write " + dump_path);
    out << socp_to_json(p) << "\n";
  }

  t0 = std::chrono::steady_clock::now();
  res.solution = solve(p, tolerance);
  res.seconds_solve = seconds_since(t0);
  res.status = res.solution.status;
  res.xi = res.solution.xi;
  return res;
}

}  // namespace sonc
