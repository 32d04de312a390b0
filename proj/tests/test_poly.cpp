#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sonc/poly.hpp"

using namespace sonc;

namespace {

SparsePoly univariate(std::initializer_list<std::pair<int, int>> terms) {
  SparsePoly f(1);
  for (auto [e, c] : terms) f.add_term({e}, c);
  return f;
}

Circuit motzkin_circuit() {
  const Rational third(1, 3);
  return Circuit{{{0, 0}, {4, 2}, {2, 4}}, {2, 2}, {third, third, third}};
}

}  // namespace

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("12"), Rational(12));
  EXPECT_EQ(parse_rational("-3/4"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
  EXPECT_EQ(parse_rational("2.5e-3"), Rational(1, 400));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Rational, MakeRationalIsCanonical) {
  Rational r = make_rational(10, -4);
  EXPECT_EQ(r.get_num(), -5);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_THROW(make_rational(1, 0), Error);
}

TEST(SparsePoly, DropsZeroCoefficients) {
  SparsePoly f(2);
  f.add_term({1, 0}, 3);
  f.add_term({1, 0}, -3);
  EXPECT_TRUE(f.empty());
  EXPECT_THROW(f.add_term({1}, 1), Error);
}

TEST(SupportPartition, Motzkin) {
  auto sp = support_partition(oracle::motzkin());
  std::vector<Exponent> lambda = {{0, 0}, {2, 4}, {4, 2}};
  EXPECT_EQ(sp.lambda_set, lambda);
  EXPECT_EQ(sp.gamma_set, (std::vector<Exponent>{{2, 2}}));
}

TEST(SupportPartition, MonomialSquare) {
  auto sp = support_partition(univariate({{2, 1}}));
  EXPECT_EQ(sp.lambda_set, (std::vector<Exponent>{{2}}));
  EXPECT_TRUE(sp.gamma_set.empty());
}

TEST(SupportPartition, Quadrinomial) {
  auto sp = support_partition(oracle::quadrinomial());
  std::vector<Exponent> gamma = {{1, 1}, {1, 2}, {2, 1}};
  EXPECT_EQ(sp.gamma_set, gamma);
  EXPECT_EQ(sp.lambda_set.size(), 3u);
}

TEST(SupportPartition, NegativeEvenTermIsGamma) {
  SparsePoly f(1);
  f.add_term({0}, 1);
  f.add_term({4}, 1);
  f.add_term({2}, -2);
  auto sp = support_partition(f);
  EXPECT_EQ(sp.gamma_set, (std::vector<Exponent>{{2}}));
}

TEST(ToPn, FlipsPositiveOddTerm) {
  SparsePoly want = oracle::quadrinomial();
  want.set_term({1, 1}, -5);
  EXPECT_EQ(to_pn(oracle::quadrinomial()), want);
}

TEST(ToPn, FixpointOnPnPolynomials) {
  EXPECT_EQ(to_pn(oracle::motzkin()), oracle::motzkin());
  SparsePoly sq = univariate({{2, 1}, {0, 3}});
  EXPECT_EQ(to_pn(sq), sq);
}

TEST(ToPn, Idempotent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    SparsePoly f(2);
    for (int k = 0; k < 6; ++k)
      f.add_term({static_cast<int>(rng() % 5), static_cast<int>(rng() % 5)}, oracle::random_rational(rng, 9, 4));
    SparsePoly g = to_pn(f);
    EXPECT_EQ(to_pn(g), g);
    EXPECT_EQ(g.size(), f.size());
  }
}

TEST(Circuit, MotzkinBoundary) {
  EXPECT_TRUE(is_nonneg_circuit(motzkin_circuit(), {1, 1, 1}, 3));
  EXPECT_FALSE(is_nonneg_circuit(motzkin_circuit(), {1, 1, 1}, 4));
  EXPECT_TRUE(is_nonneg_circuit(motzkin_circuit(), {1, 1, 1}, 0));
}

TEST(Circuit, EvenBetaNegativeDIsNonnegative) {
  EXPECT_TRUE(is_nonneg_circuit(motzkin_circuit(), {1, 1, 1}, -100));
}

TEST(Circuit, OddBetaUsesAbsoluteValue) {
  Circuit c{{{0}, {4}}, {1}, {Rational(3, 4), Rational(1, 4)}};
  // 1 + x^4 - d x: circuit number (4/3)^{3/4} 4^{1/4}
  EXPECT_TRUE(is_nonneg_circuit(c, {1, 1}, Rational(-17, 10)));
  EXPECT_FALSE(is_nonneg_circuit(c, {1, 1}, Rational(-18, 10)));
}

TEST(Circuit, Monotone) {
  for (int d = 0; d <= 3; ++d) EXPECT_TRUE(is_nonneg_circuit(motzkin_circuit(), {1, 1, 1}, d));
}

TEST(Circuit, AgreesWithGridSearch) {
  std::mt19937_64 rng(11);
  Circuit c{{{0, 0}, {4, 0}, {0, 4}}, {1, 2}, {Rational(1, 4), Rational(1, 4), Rational(1, 2)}};
  check_circuit(c);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> coef = {Rational(1 + rng() % 20, 4), Rational(1 + rng() % 20, 4), Rational(1 + rng() % 20, 4)};
    Rational d(static_cast<long>(rng() % 40), 4);
    SparsePoly f(2);
    for (std::size_t i = 0; i < 3; ++i) f.add_term(c.trellis[i], coef[i]);
    f.add_term(c.beta, -d);
    double lowest = 1e300;
    for (int i = -60; i <= 60; ++i)
      for (int j = -60; j <= 60; ++j) lowest = std::min(lowest, evaluate(f, {i / 20.0, j / 20.0}));
    if (lowest < -1e-9) EXPECT_FALSE(is_nonneg_circuit(c, coef, d)) << trial;
  }
}

TEST(Circuit, CheckRejectsWrongWeights) {
  Circuit c = motzkin_circuit();
  c.weights[0] = Rational(1, 2);
  EXPECT_THROW(check_circuit(c), Error);
}

TEST(SubstitutePower, Examples) {
  EXPECT_EQ(substitute_power(univariate({{2, 1}, {1, -1}}), 3), univariate({{6, 1}, {3, -1}}));
  EXPECT_EQ(substitute_power(oracle::motzkin(), 1), oracle::motzkin());
  SparsePoly want(2);
  want.add_term({12, 6}, 1);
  want.add_term({6, 12}, 1);
  want.add_term({0, 0}, 1);
  want.add_term({6, 6}, -3);
  EXPECT_EQ(substitute_power(oracle::motzkin(), 3), want);
}

TEST(SubstitutePower, Composes) {
  SparsePoly f = oracle::quadrinomial();
  EXPECT_EQ(substitute_power(substitute_power(f, 3), 5), substitute_power(f, 15));
}

TEST(PolyJson, RoundTripAndHash) {
  SparsePoly f = oracle::quadrinomial();
  f.set_term({1, 1}, Rational(-7, 3));
  std::string text = poly_to_json(f);
  EXPECT_EQ(parse_poly_json(text), f);
  EXPECT_EQ(poly_sha256(parse_poly_json(text)), poly_sha256(f));
  EXPECT_NE(poly_sha256(f), poly_sha256(oracle::quadrinomial()));
}

TEST(PolyJson, AcceptsDecimalAndIntegerCoefficients) {
  SparsePoly f = parse_poly_json(R"({"n": 1, "terms": [{"exp": [2], "coef": 2}, {"exp": [0], "coef": "0.5"}]})");
  EXPECT_EQ(f.coeff({2}), Rational(2));
  EXPECT_EQ(f.coeff({0}), Rational(1, 2));
}

TEST(PolyJson, RejectsDuplicatesAndBadShapes) {
  EXPECT_THROW(parse_poly_json(R"({"n": 1, "terms": [{"exp": [2], "coef": "1"}, {"exp": [2], "coef": "1"}]})"), Error);
  EXPECT_THROW(parse_poly_json(R"({"n": 2, "terms": [{"exp": [2], "coef": "1"}]})"), Error);
  EXPECT_THROW(parse_poly_json(R"({"n": 1, "terms": [{"exp": [-2], "coef": "1"}]})"), Error);
  EXPECT_THROW(parse_poly_json("not json"), Error);
}

TEST(Evaluate, MatchesOracle) {
  SparsePoly f = oracle::quadrinomial();
  std::vector<double> x = {0.3, -1.7};
  EXPECT_NEAR(evaluate(f, x), static_cast<double>(oracle::evaluate(f, x)), 1e-12);
  EXPECT_NEAR(evaluate_abs(f, x), static_cast<double>(oracle::magnitude(f, x)), 1e-12);
}
