#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "sonc/cover.hpp"
#include "sonc/lp.hpp"

using namespace sonc;

namespace {

const std::vector<Exponent> kSquare = {{0, 0}, {4, 0}, {0, 4}, {4, 4}};

LpProblem convex_combination(const Exponent& beta, const std::vector<Exponent>& pts, std::size_t objective) {
  LpProblem lp;
  const std::size_t n = beta.size();
  lp.objective.assign(pts.size(), 0);
  lp.objective[objective] = 1;
  lp.a.assign(n + 1, std::vector<Rational>(pts.size()));
  lp.rhs.assign(n + 1, 1);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) lp.a[i][j] = pts[j][i];
    lp.a[n][j] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) lp.rhs[i] = beta[i];
  return lp;
}

}  // namespace

TEST(LpSolveExact, SquareCorner) {
  LpResult r = lp_solve_exact(convex_combination({2, 1}, kSquare, 3));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.x, (std::vector<Rational>{Rational(1, 2), Rational(1, 4), 0, Rational(1, 4)}));
  EXPECT_EQ(r.value, Rational(1, 4));
}

TEST(LpSolveExact, VertexGetsFullWeight) {
  LpResult r = lp_solve_exact(convex_combination({4, 0}, kSquare, 1));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.value, 1);
}

TEST(LpSolveExact, OutsideHullIsInfeasible) {
  EXPECT_EQ(lp_solve_exact(convex_combination({5, 1}, kSquare, 0)).status, LpStatus::infeasible);
}

TEST(LpSolveExact, Unbounded) {
  LpProblem lp;
  lp.objective = {1, 0};
  lp.a = {{1, -1}};
  lp.rhs = {0};
  EXPECT_EQ(lp_solve_exact(lp).status, LpStatus::unbounded);
}

TEST(LpSolveExact, DegenerateTies) {
  // three collinear points; the objective weight ends at the extreme point
  LpResult r = lp_solve_exact(convex_combination({2}, {{0}, {2}, {4}}, 2));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.value, Rational(1, 2));
}

TEST(SimSel, SquareCornerTrellis) {
  auto lam = sim_sel({2, 1}, kSquare, {4, 4});
  EXPECT_EQ(lam[3], Rational(1, 4));
  std::vector<Exponent> support;
  for (std::size_t j = 0; j < lam.size(); ++j)
    if (lam[j] > 0) support.push_back(kSquare[j]);
  EXPECT_EQ(support, (std::vector<Exponent>{{0, 0}, {4, 0}, {4, 4}}));
}

TEST(SimSel, Motzkin) {
  std::vector<Exponent> lambda = {{0, 0}, {4, 2}, {2, 4}};
  auto lam = sim_sel({2, 2}, lambda, {0, 0});
  EXPECT_EQ(lam, (std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
}

TEST(SimSel, Errors) {
  EXPECT_THROW(sim_sel({9, 9}, kSquare, {0, 0}), Error);
  EXPECT_THROW(sim_sel({1, 1}, kSquare, {2, 2}), Error);
}

TEST(SimplexCover, MotzkinSingleCircuit) {
  auto sp = support_partition(oracle::motzkin());
  auto cover = simplex_cover(sp.lambda_set, sp.gamma_set);
  ASSERT_EQ(cover.circuits.size(), 1u);
  const Circuit& c = cover.circuits[0];
  EXPECT_EQ(c.beta, (Exponent{2, 2}));
  EXPECT_EQ(std::set<Exponent>(c.trellis.begin(), c.trellis.end()), std::set<Exponent>({{0, 0}, {4, 2}, {2, 4}}));
  check_circuit(c);
}

TEST(SimplexCover, SingleTrellis) {
  auto cover = simplex_cover({{0}, {6}}, {{3}});
  ASSERT_EQ(cover.circuits.size(), 1u);
  EXPECT_EQ(cover.circuits[0].weights, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
}

TEST(SimplexCover, SquareCoversBothPoints) {
  auto sp = support_partition(oracle::square_cover_poly());
  auto cover = simplex_cover(sp.lambda_set, sp.gamma_set);
  std::set<Exponent> covered;
  for (const auto& c : cover.circuits) {
    check_circuit(c);
    covered.insert(c.beta);
    for (const auto& a : c.trellis) EXPECT_NE(std::find(kSquare.begin(), kSquare.end(), a), kSquare.end());
  }
  EXPECT_EQ(covered, std::set<Exponent>({{1, 2}, {2, 1}}));
}

TEST(SimplexCover, EverySquareUsedWhenPossible) {
  // five squares, one inner point: the drain phase must pick up every square
  std::vector<Exponent> lambda = {{0, 0}, {6, 0}, {0, 6}, {6, 6}, {2, 2}};
  auto cover = simplex_cover(lambda, {{3, 3}});
  std::set<Exponent> used;
  for (const auto& c : cover.circuits) {
    check_circuit(c);
    EXPECT_EQ(c.beta, (Exponent{3, 3}));
    used.insert(c.trellis.begin(), c.trellis.end());
  }
  EXPECT_EQ(used.size(), lambda.size());
}

TEST(SimplexCover, Deterministic) {
  auto sp = support_partition(oracle::quadrinomial());
  auto a = simplex_cover(sp.lambda_set, sp.gamma_set);
  std::vector<Exponent> shuffled_lambda(sp.lambda_set.rbegin(), sp.lambda_set.rend());
  std::vector<Exponent> shuffled_gamma(sp.gamma_set.rbegin(), sp.gamma_set.rend());
  auto b = simplex_cover(shuffled_lambda, shuffled_gamma);
  ASSERT_EQ(a.circuits.size(), b.circuits.size());
  for (std::size_t i = 0; i < a.circuits.size(); ++i) {
    EXPECT_EQ(a.circuits[i].beta, b.circuits[i].beta);
    EXPECT_EQ(a.circuits[i].trellis, b.circuits[i].trellis);
  }
}

TEST(SimplexCover, PointOutsideHullThrows) {
  EXPECT_THROW(simplex_cover({{0}, {4}}, {{5}}), Error);
}
