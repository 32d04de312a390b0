#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sonc/conic.hpp"
#include "sonc/cover.hpp"
#include "sonc/mediated.hpp"
#include "sonc/poly.hpp"

namespace sonc {

enum class Role { a, b, c };

/// Indices into ConeTriplePlan::points.
struct PlanTriple {
  std::size_t u, v, w;
};

struct Slot {
  std::size_t triple;  // global triple number
  Role role;
};

struct ConeTriplePlan {
  int n = 0;
  std::vector<Circuit> circuits;
  std::vector<std::vector<PlanTriple>> triples;  // per circuit
  std::vector<RationalPoint> points;             // lexicographically sorted, distinct
  std::vector<Exponent> passthrough;             // square terms outside every mediated set

  std::size_t triple_count() const;
  /// Triples of all circuits in order.
  std::vector<PlanTriple> flat_triples() const;
  std::size_t point_index(const RationalPoint& p) const;  // throws if absent
  std::optional<std::size_t> find_point(const RationalPoint& p) const;
  /// For each point, the (triple, role) slots located there.
  std::vector<std::vector<Slot>> slots() const;
  Integer max_denominator() const;

 private:
  friend ConeTriplePlan build_plan(const SparsePoly&, const SimplexCoverResult&, bool);
  std::map<RationalPoint, std::size_t> index_;
};

ConeTriplePlan build_plan(const SparsePoly& f_pn, const SimplexCoverResult& cover, bool odd_mode);

/// Right-hand side of the coefficient-matching row at each plan point: the coefficient of
/// f - xi there. Also checks passthrough terms and that the plan covers the support.
std::vector<Rational> plan_rhs(const ConeTriplePlan& plan, const SparsePoly& f_pn, const Rational& xi);

enum class SocpMode { feasibility, bound };

/// Variables (a_i, b_i, c_i) per triple in K = {2ab >= c^2, a, b >= 0}.
/// Row per point: sum_{v} 2a + sum_{w} b - sum_{u} 2c = rhs.
/// In bound mode the constant row is dropped; xi = xi_offset - objective . x, to be maximized.
struct SocpProblem {
  SocpMode mode = SocpMode::feasibility;
  std::size_t triples = 0;
  std::vector<std::size_t> row_point;  // plan point of each row
  std::vector<SparseEntry> a;          // columns 3i, 3i+1, 3i+2 hold a_i, b_i, c_i
  std::vector<double> rhs;
  std::vector<double> objective;  // minimized; zero in feasibility mode
  double xi_offset = 0;
  double scale = 1;  // rows and rhs are divided by this before solving
};

SocpProblem assemble(const ConeTriplePlan& plan, const SparsePoly& f_pn, SocpMode mode, const Rational& xi = 0);

struct SocpSolution {
  SolveStatus status = SolveStatus::numerical_error;
  std::vector<double> a, b, c;
  double xi = 0;
  double primal_residual = 0, dual_residual = 0, gap = 0;
  int iterations = 0;
};

SocpSolution solve(const SocpProblem& p, double tolerance, const ConicSolver& solver = InteriorPointSolver());

std::string socp_to_json(const SocpProblem& p);

struct BoundResult {
  double xi = 0;
  SolveStatus status = SolveStatus::optimal;
  ConeTriplePlan plan;
  SocpSolution solution;
  double seconds_cover = 0, seconds_mediated = 0, seconds_assemble = 0, seconds_solve = 0;
};

/// Lower bound for f from the SOCP relaxation. The constant term is added to the square
/// terms (with coefficient zero) when missing.
BoundResult lower_bound(const SparsePoly& f, double tolerance, const std::string& dump_path = "");

/// Square terms and non-square terms of f_pn, with the constant added to the squares.
SupportPartition bound_support(const SparsePoly& f_pn);

}  // namespace sonc
