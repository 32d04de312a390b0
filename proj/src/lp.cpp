#include "sonc/lp.hpp"

#include <algorithm>

namespace sonc {

namespace {

class RevisedSimplex {
 public:
  RevisedSimplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b) : a_(std::move(a)), b_(std::move(b)) {
    m_ = a_.size();
    n_ = m_ ? a_[0].size() : 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (b_[i] < 0) {
        b_[i] = -b_[i];
        for (auto& v : a_[i]) v = -v;
      }
    }
    // artificial columns n_ .. n_+m_-1 start as the basis
    binv_.assign(m_, std::vector<Rational>(m_));
    basis_.resize(m_);
    xb_ = b_;
    for (std::size_t i = 0; i < m_; ++i) {
      binv_[i][i] = 1;
      basis_[i] = n_ + i;
    }
  }

  // Returns false when unbounded.
  bool optimize(const std::vector<Rational>& cost, bool allow_artificial) {
    std::vector<bool> in_basis(n_ + m_, false);
    for (;;) {
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (auto j : basis_) in_basis[j] = true;
      std::vector<Rational> y(m_);
      for (std::size_t r = 0; r < m_; ++r) {
        const Rational& cb = cost[basis_[r]];
        if (cb == 0) continue;
        for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[r][k];
      }
      std::size_t total = allow_artificial ? n_ + m_ : n_;
      std::size_t enter = total;
      for (std::size_t j = 0; j < total && enter == total; ++j) {
        if (in_basis[j]) continue;
        Rational d = cost[j];
        for (std::size_t k = 0; k < m_; ++k) {
          const Rational& akj = column_entry(k, j);
          if (akj != 0) d -= y[k] * akj;
        }
        if (d > 0) enter = j;
      }
      if (enter == total) return true;

      auto u = transformed_column(enter);
      std::size_t leave = m_;
      Rational best;
      for (std::size_t r = 0; r < m_; ++r) {
        if (u[r] <= 0) continue;
        Rational ratio = xb_[r] / u[r];
        if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter, u);
    }
  }

  // Moves zero-valued artificials out of the basis where a real column can replace them.
  void expel_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        auto u = transformed_column(j);
        if (u[r] != 0) {
          pivot(r, j, u);
          break;
        }
      }
    }
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(n_ + m_);
    for (std::size_t r = 0; r < m_; ++r) x[basis_[r]] = xb_[r];
    return x;
  }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }

 private:
  Rational column_entry(std::size_t row, std::size_t j) const {
    if (j < n_) return a_[row][j];
    return row == j - n_ ? Rational(1) : Rational(0);
  }

  std::vector<Rational> transformed_column(std::size_t j) const {
    std::vector<Rational> u(m_);
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t k = 0; k < m_; ++k) {
        if (binv_[r][k] == 0) continue;
        Rational e = column_entry(k, j);
        if (e != 0) u[r] += binv_[r][k] * e;
      }
    return u;
  }

  void pivot(std::size_t leave, std::size_t enter, const std::vector<Rational>& u) {
    Rational piv = u[leave];
    for (auto& v : binv_[leave]) v /= piv;
    xb_[leave] /= piv;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == leave || u[r] == 0) continue;
      Rational f = u[r];
      for (std::size_t k = 0; k < m_; ++k) binv_[r][k] -= f * binv_[leave][k];
      xb_[r] -= f * xb_[leave];
    }
    basis_[leave] = enter;
  }

  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> b_;
  std::size_t m_ = 0, n_ = 0;
  std::vector<std::vector<Rational>> binv_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> xb_;
};

}  // namespace

LpResult lp_solve_exact(const LpProblem& p) {
  const std::size_t m = p.a.size();
  const std::size_t n = p.objective.size();
  if (p.rhs.size() != m) throw Error("lp: rhs length mismatch");
  for (const auto& row : p.a)
    if (row.size() != n) throw Error("lp: row length mismatch");

  RevisedSimplex s(p.a, p.rhs);
  std::vector<Rational> phase1(n + m);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
  s.optimize(phase1, true);
  auto x = s.solution();
  LpResult res;
  for (std::size_t i = 0; i < m; ++i) {
    if (x[n + i] != 0) {
      res.status = LpStatus::infeasible;
      return res;
    }
  }
  s.expel_artificials();

  std::vector<Rational> cost(n + m);
  std::copy(p.objective.begin(), p.objective.end(), cost.begin());
  if (!s.optimize(cost, false)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  x = s.solution();
  x.resize(n);
  res.status = LpStatus::optimal;
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) res.value += p.objective[j] * x[j];
  res.x = std::move(x);
  return res;
}

}  // namespace sonc
