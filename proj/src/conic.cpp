#include "sonc/conic.hpp"

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sonc {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::near_optimal: return "near-optimal";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::numerical_error: return "numerical-error";
  }
  return "unknown";
}

bool has_solution(SolveStatus s) { return s == SolveStatus::optimal || s == SolveStatus::near_optimal; }

namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNearOptimalGap = 1e3;

// Column block of A belonging to one cone; touches at most three rows.
struct Block {
  int nrows = 0;
  std::size_t row[3] = {0, 0, 0};
  double coef[3][3] = {};  // coef[j][k]: row j, cone coordinate k
};

struct Scaling {
  Matrix3d w, winv;
  Vector3d lambda;
};

Vector3d seg(const VectorXd& v, std::size_t i) { return v.segment<3>(3 * i); }

// x0^2 - |x1|^2, factored to avoid cancellation near the boundary
double soc_residual(const Vector3d& x) {
  double r = std::hypot(x(1), x(2));
  return (x(0) - r) * (x(0) + r);
}

Vector3d jordan(const Vector3d& u, const Vector3d& v) {
  Vector3d r;
  r(0) = u.dot(v);
  r.tail<2>() = u(0) * v.tail<2>() + v(0) * u.tail<2>();
  return r;
}

// Solves lambda o z = r.
Vector3d jordan_div(const Vector3d& l, const Vector3d& r) {
  double det = soc_residual(l);
  Vector3d z;
  z(0) = (l(0) * r(0) - l.tail<2>().dot(r.tail<2>())) / det;
  z.tail<2>() = (r.tail<2>() - z(0) * l.tail<2>()) / l(0);
  return z;
}

Scaling nt_scaling(const Vector3d& x, const Vector3d& s) {
  double xr = std::sqrt(soc_residual(x));
  double sr = std::sqrt(soc_residual(s));
  Vector3d xh = x / xr, sh = s / sr;
  double gamma = std::sqrt((1 + xh.dot(sh)) / 2);
  Vector3d wb;
  wb(0) = (sh(0) + xh(0)) / (2 * gamma);
  wb.tail<2>() = (sh.tail<2>() - xh.tail<2>()) / (2 * gamma);
  double eta = std::sqrt(sr / xr);
  Eigen::Vector2d w1 = wb.tail<2>();
  Eigen::Matrix2d inner = Eigen::Matrix2d::Identity() + w1 * w1.transpose() / (1 + wb(0));
  Scaling sc;
  sc.w(0, 0) = wb(0);
  sc.w.block<1, 2>(0, 1) = w1.transpose();
  sc.w.block<2, 1>(1, 0) = w1;
  sc.w.block<2, 2>(1, 1) = inner;
  sc.winv = sc.w;
  sc.winv.block<1, 2>(0, 1) *= -1;
  sc.winv.block<2, 1>(1, 0) *= -1;
  sc.w *= eta;
  sc.winv /= eta;
  sc.lambda = sc.w * x;
  return sc;
}

// Largest alpha with x + alpha d in the cone.
double max_step(const Vector3d& x, const Vector3d& d) {
  double qa = soc_residual(d);
  double qb = 2 * (x(0) * d(0) - x.tail<2>().dot(d.tail<2>()));
  double qc = soc_residual(x);
  double alpha = kInf;
  if (d(0) < 0) alpha = -x(0) / d(0);
  if (std::fabs(qa) < 1e-300) {
    if (qb < 0) alpha = std::min(alpha, -qc / qb);
    return alpha;
  }
  double disc = qb * qb - 4 * qa * qc;
  if (disc < 0) return alpha;
  double sq = std::sqrt(disc);
  double t = -0.5 * (qb + (qb >= 0 ? sq : -sq));
  double r1 = t / qa, r2 = (t != 0) ? qc / t : kInf;
  double lo = std::min(r1, r2), hi = std::max(r1, r2);
  if (qa > 0) {
    if (lo > 0) alpha = std::min(alpha, lo);
  } else {
    if (hi > 0) alpha = std::min(alpha, hi);
  }
  return alpha;
}

// Sparse LDL^T of a quasi-definite matrix with a fixed sign per pivot. Pivots that come out
// with the wrong sign or too small are replaced, and the caller refines against the exact system.
class SignedLdl {
 public:
  /// upper: upper triangle, compressed by column, already permuted.
  void analyze(const Eigen::SparseMatrix<double>& upper) {
    const int n = static_cast<int>(upper.cols());
    parent_.assign(n, -1);
    std::vector<int> count(n, 0), mark(n, -1);
    for (int j = 0; j < n; ++j) {
      mark[j] = j;
      for (Eigen::SparseMatrix<double>::InnerIterator it(upper, j); it; ++it) {
        int i = static_cast<int>(it.row());
        if (i >= j) continue;
        while (mark[i] != j) {
          if (parent_[i] == -1) parent_[i] = j;
          ++count[i];
          mark[i] = j;
          i = parent_[i];
        }
      }
    }
    lp_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) lp_[i + 1] = lp_[i] + count[i];
    li_.assign(lp_[n], 0);
    lx_.assign(lp_[n], 0.0);
    d_.assign(n, 0.0);
  }

  void factor(const Eigen::SparseMatrix<double>& upper, const std::vector<int>& sign, double eps, double delta) {
    const int n = static_cast<int>(upper.cols());
    std::vector<double> y(n, 0.0);
    std::vector<char> used(n, 0);
    std::vector<int> next(lp_.begin(), lp_.end() - 1), pattern, stack;
    for (int k = 0; k < n; ++k) {
      pattern.clear();
      d_[k] = 0;
      double mag = 0;  // scale of the terms summed into the pivot
      for (Eigen::SparseMatrix<double>::InnerIterator it(upper, k); it; ++it) {
        int i = static_cast<int>(it.row());
        if (i == k) {
          d_[k] = it.value();
          mag += std::fabs(it.value());
          continue;
        }
        y[i] = it.value();
        if (used[i]) continue;
        stack.clear();
        for (int j = i; j != -1 && j < k && !used[j]; j = parent_[j]) {
          used[j] = 1;
          stack.push_back(j);
        }
        while (!stack.empty()) {
          pattern.push_back(stack.back());
          stack.pop_back();
        }
      }
      for (auto p = pattern.rbegin(); p != pattern.rend(); ++p) {
        const int c = *p;
        const double yc = y[c];
        for (int j = lp_[c]; j < next[c]; ++j) y[li_[j]] -= lx_[j] * yc;
        const double l = yc / d_[c];
        li_[next[c]] = k;
        lx_[next[c]] = l;
        ++next[c];
        d_[k] -= yc * l;
        mag += std::fabs(yc * l);
        y[c] = 0;
        used[c] = 0;
      }
      if (!(sign[k] * d_[k] > std::max(eps, kRelEps * mag))) {
        d_[k] = sign[k] * std::max(delta, kRelDelta * mag);
      }
    }
  }

  void solve(Eigen::VectorXd& x) const {
    const int n = static_cast<int>(d_.size());
    for (int i = 0; i < n; ++i)
      for (int j = lp_[i]; j < lp_[i + 1]; ++j) x(li_[j]) -= lx_[j] * x(i);
    for (int i = 0; i < n; ++i) x(i) /= d_[i];
    for (int i = n - 1; i >= 0; --i)
      for (int j = lp_[i]; j < lp_[i + 1]; ++j) x(i) -= lx_[j] * x(li_[j]);
  }

 private:
  static constexpr double kRelEps = 1e-13;
  static constexpr double kRelDelta = 1e-8;

  std::vector<int> parent_, lp_, li_;
  std::vector<double> lx_, d_;
};

// Augmented system [-W^2, A^T; A, 0] (dx, dy) = (u, v), solved in the variable W dx. The scaled
// matrix [-I, W^{-1} A^T; A W^{-1}, 0] is quasi-definite after regularization, and its x-block
// stays well scaled however degenerate W becomes. This also avoids forming A W^{-2} A^T.
class Kkt {
 public:
  Kkt(const std::vector<Block>& blocks, std::size_t rows) : blocks_(blocks), rows_(rows), nv_(3 * blocks.size()) {
    const int dim = static_cast<int>(nv_ + rows_);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < dim; ++i) trip.emplace_back(i, i, 1.0);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const Block& bl = blocks_[i];
      for (int j = 0; j < bl.nrows; ++j)
        for (int c = 0; c < 3; ++c) {
          trip.emplace_back(nv_ + bl.row[j], 3 * i + c, 1.0);
          trip.emplace_back(3 * i + c, nv_ + bl.row[j], 1.0);
        }
    }
    Eigen::SparseMatrix<double> full(dim, dim);
    full.setFromTriplets(trip.begin(), trip.end());
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
    Eigen::AMDOrdering<int>()(full, perm);
    // AMD returns new -> old; perm_ maps old -> new
    perm_.assign(dim, 0);
    for (int k = 0; k < dim; ++k) perm_[perm.indices()(k)] = k;
    sign_.assign(dim, 0);
    for (int i = 0; i < dim; ++i) sign_[perm_[i]] = static_cast<std::size_t>(i) < nv_ ? -1 : 1;
    winv_.assign(blocks.size(), Matrix3d::Identity());
    assemble();
    ldl_.analyze(m_);
  }

  bool factor(const std::vector<Scaling>& sc) {
    for (std::size_t i = 0; i < sc.size(); ++i) winv_[i] = sc[i].winv;
    assemble();
    ldl_.factor(m_, sign_, kPivotEps, kPivotDelta);
    return true;
  }

  /// Approximate solution; callers refine against the exact system.
  void solve(const VectorXd& u, const VectorXd& v, VectorXd& x, VectorXd& y) const {
    const std::size_t dim = nv_ + rows_;
    VectorXd z(dim);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      Vector3d wu = winv_[i] * u.segment<3>(3 * i);
      for (int c = 0; c < 3; ++c) z(perm_[3 * i + c]) = wu(c);
    }
    for (std::size_t i = 0; i < rows_; ++i) z(perm_[nv_ + i]) = v(i);
    ldl_.solve(z);
    x.resize(nv_);
    y.resize(rows_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      Vector3d xt(z(perm_[3 * i]), z(perm_[3 * i + 1]), z(perm_[3 * i + 2]));
      x.segment<3>(3 * i) = winv_[i] * xt;
    }
    for (std::size_t i = 0; i < rows_; ++i) y(i) = z(perm_[nv_ + i]);
  }

 private:
  static constexpr double kStaticReg = 1e-10;
  static constexpr double kPivotEps = 1e-14;
  static constexpr double kPivotDelta = 1e-9;

  void assemble() {
    const int dim = static_cast<int>(nv_ + rows_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(blocks_.size() * 12 + rows_);
    // upper triangle of P K P^T
    auto put = [&](int r, int c, double v) {
      int pr = perm_[r], pc = perm_[c];
      if (pr > pc) std::swap(pr, pc);
      trip.emplace_back(pr, pc, v);
    };
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      for (int c = 0; c < 3; ++c) put(3 * i + c, 3 * i + c, -1 - kStaticReg);
      const Block& bl = blocks_[i];
      for (int j = 0; j < bl.nrows; ++j) {
        Vector3d a(bl.coef[j][0], bl.coef[j][1], bl.coef[j][2]);
        Vector3d aw = winv_[i].transpose() * a;
        for (int c = 0; c < 3; ++c) put(nv_ + bl.row[j], 3 * i + c, aw(c));
      }
    }
    for (std::size_t r = 0; r < rows_; ++r) put(nv_ + r, nv_ + r, kStaticReg);
    m_.resize(dim, dim);
    m_.setFromTriplets(trip.begin(), trip.end());
  }

  const std::vector<Block>& blocks_;
  std::size_t rows_, nv_;
  std::vector<int> perm_, sign_;
  std::vector<Matrix3d> winv_;
  Eigen::SparseMatrix<double> m_;
  SignedLdl ldl_;
};

}  // namespace

ConicResult InteriorPointSolver::solve(const ConicProblem& p, double tol) const {
  const std::size_t m = p.rows;
  const std::size_t k = p.cones;
  const std::size_t nv = 3 * k;
  if (p.b.size() != m || p.c.size() != nv) throw std::invalid_argument("conic problem: inconsistent sizes");

  std::vector<Block> blocks(k);
  for (const auto& e : p.a) {
    if (e.row >= m || e.col >= nv) throw std::invalid_argument("conic problem: entry out of range");
    if (e.value == 0) continue;
    Block& bl = blocks[e.col / 3];
    int j = 0;
    while (j < bl.nrows && bl.row[j] != e.row) ++j;
    if (j == bl.nrows) {
      if (bl.nrows == 3) throw std::invalid_argument("conic problem: a cone block touches more than three rows");
      bl.row[bl.nrows++] = e.row;
    }
    bl.coef[j][e.col % 3] += e.value;
  }

  auto mul_a = [&](const VectorXd& x) {
    VectorXd r = VectorXd::Zero(m);
    for (std::size_t i = 0; i < k; ++i) {
      const Block& bl = blocks[i];
      for (int j = 0; j < bl.nrows; ++j)
        r(bl.row[j]) += bl.coef[j][0] * x(3 * i) + bl.coef[j][1] * x(3 * i + 1) + bl.coef[j][2] * x(3 * i + 2);
    }
    return r;
  };
  auto mul_at = [&](const VectorXd& y) {
    VectorXd r = VectorXd::Zero(nv);
    for (std::size_t i = 0; i < k; ++i) {
      const Block& bl = blocks[i];
      for (int j = 0; j < bl.nrows; ++j)
        for (int c = 0; c < 3; ++c) r(3 * i + c) += bl.coef[j][c] * y(bl.row[j]);
    }
    return r;
  };

  VectorXd b = Eigen::Map<const VectorXd>(p.b.data(), m);
  VectorXd c = Eigen::Map<const VectorXd>(p.c.data(), nv);
  VectorXd x = VectorXd::Zero(nv), s = VectorXd::Zero(nv), y = VectorXd::Zero(m);
  for (std::size_t i = 0; i < k; ++i) x(3 * i) = s(3 * i) = 1;
  double tau = 1, kappa = 1;
  const double nu = static_cast<double>(k) + 1;
  const double bnorm = 1 + b.lpNorm<Eigen::Infinity>();
  const double cnorm = 1 + c.lpNorm<Eigen::Infinity>();

  ConicResult res;
  Kkt kkt(blocks, m);
  std::vector<Scaling> sc(k);

  for (int iter = 0; iter <= max_iterations_; ++iter) {
    res.iterations = iter;
    VectorXd rp = mul_a(x) - b * tau;
    VectorXd rd = mul_at(y) + s - c * tau;
    double cx = c.dot(x), by = b.dot(y);
    double rg = cx - by + kappa;
    double mu = (x.dot(s) + tau * kappa) / nu;

    res.primal_residual = rp.lpNorm<Eigen::Infinity>() / tau / bnorm;
    res.dual_residual = rd.lpNorm<Eigen::Infinity>() / tau / cnorm;
    double pobj = cx / tau, dobj = by / tau;
    res.gap = std::fabs(pobj - dobj) / (1 + std::fabs(pobj));
    double compl_gap = x.dot(s) / (tau * tau);
    if (res.primal_residual <= tol && res.dual_residual <= tol && (res.gap <= tol || compl_gap <= tol)) {
      res.status = SolveStatus::optimal;
      break;
    }
    if (by > 0 && (mul_at(y) + s).lpNorm<Eigen::Infinity>() / by <= tol && tau < 1e-3 * kappa) {
      res.status = SolveStatus::infeasible;
      break;
    }
    if (cx < 0 && mul_a(x).lpNorm<Eigen::Infinity>() / -cx <= tol && tau < 1e-3 * kappa) {
      res.status = SolveStatus::unbounded;
      break;
    }
    if (iter == max_iterations_) {
      res.status = SolveStatus::max_iterations;
      break;
    }

    bool interior = true;
    for (std::size_t i = 0; i < k && interior; ++i)
      interior = soc_residual(seg(x, i)) > 0 && soc_residual(seg(s, i)) > 0 && x(3 * i) > 0 && s(3 * i) > 0;
    if (interior)
      for (std::size_t i = 0; i < k; ++i) sc[i] = nt_scaling(seg(x, i), seg(s, i));
    if (!interior || !kkt.factor(sc)) {
      res.status = SolveStatus::numerical_error;
      break;
    }

    auto apply_block = [&](const VectorXd& v, auto&& op) {
      VectorXd r(nv);
      for (std::size_t i = 0; i < k; ++i) r.segment<3>(3 * i) = op(i, Vector3d(seg(v, i)));
      return r;
    };

    auto w_apply = [&](const VectorXd& v) {
      return apply_block(v, [&](std::size_t i, const Vector3d& u) -> Vector3d { return sc[i].w * u; });
    };
    auto winv_apply = [&](const VectorXd& v) {
      return apply_block(v, [&](std::size_t i, const Vector3d& u) -> Vector3d { return sc[i].winv * u; });
    };

    // -W^2 q2 + A^T q1 = c,  A q2 = b
    VectorXd q1, q2;
    {
      auto w2 = [&](const VectorXd& v) { return w_apply(w_apply(v)); };
      kkt.solve(c, b, q2, q1);
      for (int it = 0; it < 3; ++it) {
        VectorXd e2, e1;
        kkt.solve(c - (mul_at(q1) - w2(q2)), b - mul_a(q2), e2, e1);
        q2 += e2;
        q1 += e1;
      }
    }
    const double q_coef = c.dot(q2) - b.dot(q1) - kappa / tau;

    struct Dir {
      VectorXd dx, dy, ds;
      double dtau, dkappa;
    };
    // Newton system with right-hand sides
    //   A dx - b dtau = r1,  A^T dy + ds - c dtau = r2,  c^T dx - b^T dy + dkappa = r3,
    //   W dx + W^{-1} ds = rc,  kappa dtau + tau dkappa = rt.
    struct Rhs {
      VectorXd r1, r2, rc;
      double r3, rt;
    };
    auto reduced_solve = [&](const Rhs& r) {
      // -W^2 p2 + A^T p1 = -t,  A p2 = r1
      VectorXd t = w_apply(r.rc) - r.r2;
      VectorXd p1, p2;
      kkt.solve(-t, r.r1, p2, p1);
      Dir d;
      d.dtau = (r.r3 - r.rt / tau - c.dot(p2) + b.dot(p1)) / q_coef;
      d.dy = p1 + d.dtau * q1;
      d.dx = p2 + d.dtau * q2;
      d.ds = r.r2 - mul_at(d.dy) + c * d.dtau;
      d.dkappa = (r.rt - kappa * d.dtau) / tau;
      return d;
    };
    auto residual = [&](const Rhs& r, const Dir& d) {
      Rhs e;
      e.r1 = r.r1 - (mul_a(d.dx) - b * d.dtau);
      e.r2 = r.r2 - (mul_at(d.dy) + d.ds - c * d.dtau);
      e.r3 = r.r3 - (c.dot(d.dx) - b.dot(d.dy) + d.dkappa);
      e.rc = r.rc - (w_apply(d.dx) + winv_apply(d.ds));
      e.rt = r.rt - (kappa * d.dtau + tau * d.dkappa);
      return e;
    };
    auto size = [](const Rhs& r) {
      return std::max({r.r1.lpNorm<Eigen::Infinity>(), r.r2.lpNorm<Eigen::Infinity>(),
                       r.rc.lpNorm<Eigen::Infinity>(), std::fabs(r.r3), std::fabs(r.rt)});
    };
    auto direction = [&](const VectorXd& dc, double rtau, double eta) {
      Rhs r{-eta * rp, -eta * rd, dc, -eta * rg, rtau};
      Dir d = reduced_solve(r);
      double err = size(residual(r, d));
      for (int it = 0; it < 5 && err > 1e-14 * std::max(1.0, size(r)); ++it) {
        Dir corr = reduced_solve(residual(r, d));
        Dir trial{d.dx + corr.dx, d.dy + corr.dy, d.ds + corr.ds, d.dtau + corr.dtau, d.dkappa + corr.dkappa};
        double e = size(residual(r, trial));
        if (!(e < err)) break;
        d = std::move(trial);
        err = e;
      }
      return d;
    };
    auto step_length = [&](const Dir& d) {
      double a = kInf;
      for (std::size_t i = 0; i < k; ++i) {
        a = std::min(a, max_step(seg(x, i), seg(d.dx, i)));
        a = std::min(a, max_step(seg(s, i), seg(d.ds, i)));
      }
      if (d.dtau < 0) a = std::min(a, -tau / d.dtau);
      if (d.dkappa < 0) a = std::min(a, -kappa / d.dkappa);
      return a;
    };

    VectorXd dc_aff(nv);
    for (std::size_t i = 0; i < k; ++i) dc_aff.segment<3>(3 * i) = -sc[i].lambda;
    Dir aff = direction(dc_aff, -tau * kappa, 1.0);
    double alpha_aff = std::min(1.0, step_length(aff));
    double sigma = std::pow(1 - alpha_aff, 3);

    VectorXd dc(nv);
    for (std::size_t i = 0; i < k; ++i) {
      const Vector3d& l = sc[i].lambda;
      Vector3d wdx = sc[i].w * seg(aff.dx, i);
      Vector3d wids = sc[i].winv * seg(aff.ds, i);
      Vector3d rc = -jordan(l, l) - jordan(wids, wdx);
      rc(0) += sigma * mu;
      dc.segment<3>(3 * i) = jordan_div(l, rc);
    }
    double rtau = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    Dir d = direction(dc, rtau, 1 - sigma);
    double alpha = std::min(1.0, 0.99 * step_length(d));

    VectorXd x1 = x + alpha * d.dx, s1 = s + alpha * d.ds, y1 = y + alpha * d.dy;
    double tau1 = tau + alpha * d.dtau, kappa1 = kappa + alpha * d.dkappa;
    if (!std::isfinite(tau1) || !std::isfinite(kappa1) || !x1.allFinite() || !s1.allFinite() || !y1.allFinite()) {
      res.status = SolveStatus::numerical_error;
      break;
    }
    x = std::move(x1);
    s = std::move(s1);
    y = std::move(y1);
    tau = tau1;
    kappa = kappa1;
  }
  // breakdown close to the optimum: feasible to tolerance, duality gap slightly above it
  if ((res.status == SolveStatus::numerical_error || res.status == SolveStatus::max_iterations) &&
      res.primal_residual <= tol && res.dual_residual <= tol && res.gap <= kNearOptimalGap * tol)
    res.status = SolveStatus::near_optimal;

  res.x.resize(nv);
  res.y.resize(m);
  for (std::size_t i = 0; i < nv; ++i) res.x[i] = x(i) / tau;
  for (std::size_t i = 0; i < m; ++i) res.y[i] = y(i) / tau;
  return res;
}

}  // namespace sonc
