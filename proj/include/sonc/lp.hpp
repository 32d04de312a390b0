#pragma once

#include <vector>

#include "sonc/rational.hpp"

namespace sonc {

/// maximize c^T x  subject to  A x = b, x >= 0
struct LpProblem {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<Rational> x;
  Rational value;
};

/// Two-phase revised simplex in exact arithmetic with Bland's rule. Returns a basic optimal solution.
LpResult lp_solve_exact(const LpProblem& p);

}  // namespace sonc
