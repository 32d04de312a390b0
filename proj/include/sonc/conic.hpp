#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sonc {

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// minimize c^T x  subject to  A x = b,  x in Q^3 x ... x Q^3
/// where Q^3 = {(x0, x1, x2) : x0 >= sqrt(x1^2 + x2^2)}.
struct ConicProblem {
  std::size_t rows = 0;
  std::size_t cones = 0;
  std::vector<SparseEntry> a;
  std::vector<double> b;
  std::vector<double> c;
};

/// near_optimal: the iteration broke down with residuals within tolerance and a relative
/// duality gap within 1000 times the tolerance.
enum class SolveStatus { optimal, near_optimal, infeasible, unbounded, max_iterations, numerical_error };

std::string to_string(SolveStatus s);

/// optimal or near_optimal
bool has_solution(SolveStatus s);

struct ConicResult {
  SolveStatus status = SolveStatus::numerical_error;
  std::vector<double> x;
  std::vector<double> y;
  double primal_residual = 0;
  double dual_residual = 0;
  double gap = 0;
  int iterations = 0;
};

class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual ConicResult solve(const ConicProblem& p, double tolerance) const = 0;
};

/// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
/// Mehrotra predictor-corrector steps. Each Newton system is an augmented KKT system solved
/// with a sparse LDL^T factorization and iterative refinement.
class InteriorPointSolver : public ConicSolver {
 public:
  explicit InteriorPointSolver(int max_iterations = 200) : max_iterations_(max_iterations) {}
  ConicResult solve(const ConicProblem& p, double tolerance) const override;

 private:
  int max_iterations_;
};

}  // namespace sonc
