#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sonc/plan.hpp"

using namespace sonc;

namespace {

ConeTriplePlan plan_for(const SparsePoly& f, bool odd_mode = false) {
  SparsePoly g = to_pn(f);
  auto sp = support_partition(g);
  return build_plan(g, simplex_cover(sp.lambda_set, sp.gamma_set), odd_mode);
}

double row_value(const SocpProblem& p, std::size_t row, const std::vector<double>& x) {
  double s = 0;
  for (const auto& e : p.a)
    if (e.row == row) s += e.value * x[e.col];
  return s;
}

}  // namespace

TEST(BuildPlan, Motzkin) {
  ConeTriplePlan plan = plan_for(oracle::motzkin());
  EXPECT_EQ(plan.triple_count(), 3u);
  EXPECT_EQ(plan.points.size(), 6u);
  EXPECT_TRUE(plan.passthrough.empty());
  EXPECT_EQ(plan.max_denominator(), 1);
  EXPECT_TRUE(std::is_sorted(plan.points.begin(), plan.points.end()));
}

TEST(BuildPlan, MotzkinOddMode) {
  ConeTriplePlan plan = plan_for(oracle::motzkin(), true);
  EXPECT_EQ(plan.triple_count(), 5u);
  EXPECT_EQ(plan.max_denominator(), 3);
}

TEST(BuildPlan, MidpointCircuit) {
  SparsePoly f(1);
  f.add_term({0}, 1);
  f.add_term({4}, 1);
  f.add_term({2}, -2);
  EXPECT_EQ(plan_for(f).triple_count(), 1u);
}

TEST(BuildPlan, SlotsCountEveryRole) {
  ConeTriplePlan plan = plan_for(oracle::quadrinomial());
  std::size_t total = 0;
  for (const auto& s : plan.slots()) total += s.size();
  EXPECT_EQ(total, 3 * plan.triple_count());
  EXPECT_THROW(plan.point_index({Rational(7), Rational(7)}), Error);
}

TEST(BuildPlan, PassthroughSquares) {
  // the inner term sits on the face y = 0, so y^2 joins no circuit
  SparsePoly f(2);
  f.add_term({0, 0}, 1);
  f.add_term({4, 0}, 1);
  f.add_term({2, 0}, -2);
  f.add_term({0, 2}, 1);
  ConeTriplePlan plan = plan_for(f);
  EXPECT_EQ(plan.passthrough, (std::vector<Exponent>{{0, 2}}));
  EXPECT_EQ(plan.triple_count(), 1u);
}

TEST(Assemble, MotzkinRows) {
  SparsePoly f = oracle::motzkin();
  ConeTriplePlan plan = plan_for(f);
  SocpProblem p = assemble(plan, f, SocpMode::feasibility, 0);
  EXPECT_EQ(p.row_point.size(), 6u);
  EXPECT_EQ(p.triples, 3u);
  // exact solution in plan order
  std::vector<double> x = {0.5, 1, 1, 1, 2, 2, 0.5, 1, 1};
  for (std::size_t r = 0; r < p.row_point.size(); ++r) EXPECT_NEAR(row_value(p, r, x), p.rhs[r] * p.scale, 1e-12);
  auto rhs = plan_rhs(plan, f, 0);
  EXPECT_EQ(rhs[plan.point_index({Rational(2), Rational(2)})], -3);
}

TEST(Assemble, BoundModeDropsConstantRow) {
  SparsePoly f = oracle::motzkin();
  ConeTriplePlan plan = plan_for(f);
  SocpProblem p = assemble(plan, f, SocpMode::bound);
  EXPECT_EQ(p.row_point.size(), 5u);
}

TEST(Assemble, NegativeTermOutsidePlanThrows) {
  SparsePoly f = oracle::motzkin();
  ConeTriplePlan plan = plan_for(f);
  SparsePoly g = f;
  g.add_term({8, 8}, -1);
  EXPECT_THROW(assemble(plan, g, SocpMode::feasibility, 0), Error);
}

TEST(Solve, MotzkinFeasibility) {
  SparsePoly f = oracle::motzkin();
  ConeTriplePlan plan = plan_for(f);
  SocpProblem p = assemble(plan, f, SocpMode::feasibility, 0);
  // no strictly feasible point: the iteration stalls a little above 1e-8 but is optimal at 1e-7
  SocpSolution s = solve(p, 1e-7);
  EXPECT_EQ(s.status, SolveStatus::optimal);
  EXPECT_LE(s.primal_residual, 1e-7);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_GE(s.a[i], 0);
    EXPECT_GE(s.b[i], 0);
    EXPECT_GE(2 * s.a[i] * s.b[i] - s.c[i] * s.c[i], -1e-6);
  }
  SocpSolution tight = solve(p, 1e-8);
  EXPECT_LE(tight.primal_residual, 1e-6);
}

TEST(Solve, InfeasibleToy) {
  // one triple with rows a = 0, b = 0, c = 1
  SocpProblem p;
  p.triples = 1;
  p.row_point = {0, 1, 2};
  p.a = {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}};
  p.rhs = {0, 0, 1};
  p.objective = {0, 0, 0};
  SocpSolution s = solve(p, 1e-8);
  EXPECT_EQ(s.status, SolveStatus::infeasible);
}

TEST(Solve, SimpleOptimum) {
  // minimize c subject to a = 1, b = 2: optimum c = -2
  SocpProblem p;
  p.mode = SocpMode::bound;
  p.triples = 1;
  p.row_point = {0, 1};
  p.a = {{0, 0, 1}, {1, 1, 1}};
  p.rhs = {1, 2};
  p.objective = {0, 0, 1};
  SocpSolution s = solve(p, 1e-9);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.c[0], -2, 1e-6);
  EXPECT_NEAR(s.xi, 2, 1e-6);
}

TEST(LowerBound, Quadrinomial) {
  BoundResult b = lower_bound(oracle::quadrinomial(), 1e-8);
  ASSERT_EQ(b.status, SolveStatus::optimal);
  EXPECT_NEAR(b.xi, -6.916501, 1e-3);
}

TEST(LowerBound, Motzkin) {
  BoundResult b = lower_bound(oracle::motzkin(), 1e-8);
  ASSERT_TRUE(has_solution(b.status));
  // the true minimum is 0; allow solver tolerance on either side
  EXPECT_GE(b.xi, -1e-4);
  EXPECT_LE(b.xi, 1e-6);
}

TEST(LowerBound, SumOfSquaresOnly) {
  SparsePoly f(1);
  f.add_term({0}, 1);
  f.add_term({2}, 1);
  BoundResult b = lower_bound(f, 1e-8);
  EXPECT_EQ(b.xi, 1);
  EXPECT_EQ(b.plan.triple_count(), 0u);

  SparsePoly five(2);
  five.add_term({0, 0}, 5);
  b = lower_bound(five, 1e-8);
  EXPECT_EQ(b.xi, 5);
  EXPECT_EQ(b.plan.triple_count(), 0u);
}

TEST(LowerBound, MissingConstantIsAdded) {
  // x^4 - 2 x^2 has no constant term; its minimum is -1
  SparsePoly f(1);
  f.add_term({4}, 1);
  f.add_term({2}, -2);
  BoundResult b = lower_bound(f, 1e-8);
  ASSERT_TRUE(has_solution(b.status));
  EXPECT_NEAR(b.xi, -1, 1e-5);
}

TEST(SocpJson, ContainsShape) {
  SparsePoly f = oracle::motzkin();
  ConeTriplePlan plan = plan_for(f);
  std::string j = socp_to_json(assemble(plan, f, SocpMode::feasibility, 0));
  EXPECT_NE(j.find("\"rotated3\":3"), std::string::npos);
  EXPECT_NE(j.find("\"cols\":9"), std::string::npos);
  EXPECT_NE(j.find("\"rows\":6"), std::string::npos);
}
