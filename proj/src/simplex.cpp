#include "fluctwork/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "fluctwork/errors.hpp"

namespace fluctwork {

namespace {

using Eigen::Index;

// Revised simplex on  min cost^T z,  [A | I] z = b,  z >= 0  (artificials are columns n..n+m-1).
// The basis is refactorized from the stored matrix every iteration, so rounding from earlier
// pivots never accumulates; with the handful of rows these programs have that costs little.
class RevisedSimplex {
 public:
  RevisedSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : a_(a), b_(b), m_(a.rows()), n_(a.cols()), basis_(static_cast<std::size_t>(a.rows())) {
    for (Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
    refactor();
  }

  enum class Step { optimal, pivoted, unbounded };

  // One Bland's-rule iteration over the real columns.
  Step step(const Eigen::VectorXd& cost, double tol) {
    const Eigen::VectorXd y = duals(cost);
    std::optional<Index> enter;
    for (Index j = 0; j < n_; ++j) {
      if (is_basic(j)) continue;
      if (cost(j) - a_.col(j).dot(y) < -tol) {
        enter = j;
        break;
      }
    }
    if (!enter) return Step::optimal;
    const Eigen::VectorXd u = lu_.solve(a_.col(*enter));
    std::optional<Index> leave;
    double best = 0.0;
    for (Index i = 0; i < m_; ++i) {
      if (u(i) <= tol) continue;
      const double ratio = std::max(0.0, x_(i)) / u(i);
      const bool tie = leave && std::abs(ratio - best) <= 1e-14 * std::max(1.0, best);
      if (!leave || (ratio < best && !tie) || (tie && basis_[static_cast<std::size_t>(i)] <
                                                          basis_[static_cast<std::size_t>(*leave)])) {
        leave = i;
        best = ratio;
      }
    }
    if (!leave) return Step::unbounded;
    swap_in(*leave, *enter);
    return Step::pivoted;
  }

  // Replaces artificials still basic after phase 1 by real columns where possible.
  std::size_t drive_out_artificials(double tol) {
    std::size_t pivots = 0;
    for (Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      const Eigen::RowVectorXd row = lu_.solve(Eigen::MatrixXd::Identity(m_, m_)).row(i);
      std::optional<Index> col;
      double best = tol;
      for (Index j = 0; j < n_; ++j) {
        if (is_basic(j)) continue;
        const double v = std::abs(row.dot(a_.col(j)));
        if (v > best) {
          best = v;
          col = j;
        }
      }
      if (col) {
        swap_in(i, *col);
        ++pivots;
      }
    }
    return pivots;
  }

  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(m_);
    for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
    return lu_.transpose().solve(cb);
  }

  double objective(const Eigen::VectorXd& cost) const {
    double v = 0.0;
    for (Index i = 0; i < m_; ++i) v += cost(basis_[static_cast<std::size_t>(i)]) * x_(i);
    return v;
  }

  const std::vector<Index>& basis() const { return basis_; }

 private:
  bool is_basic(Index j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

  void swap_in(Index row, Index col) {
    basis_[static_cast<std::size_t>(row)] = col;
    refactor();
  }

  void refactor() {
    Eigen::MatrixXd bm(m_, m_);
    for (Index i = 0; i < m_; ++i) {
      const Index j = basis_[static_cast<std::size_t>(i)];
      bm.col(i) = j < n_ ? Eigen::VectorXd(a_.col(j)) : Eigen::VectorXd::Unit(m_, j - n_);
    }
    lu_.compute(bm);
    x_ = lu_.solve(b_);
  }

  const Eigen::MatrixXd& a_;
  const Eigen::VectorXd& b_;
  Index m_;
  Index n_;
  std::vector<Index> basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd x_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol, std::size_t max_pivots) {
  const std::size_t m = lp.rows;
  const std::size_t n = lp.cols;
  if (lp.a.size() != m * n || lp.b.size() != m || (!lp.c.empty() && lp.c.size() != n)) {
    throw DimensionError("linear program arrays do not match its shape");
  }
  const auto mi = static_cast<Index>(m);
  const auto ni = static_cast<Index>(n);

  // Row then column equilibration; rows also flipped so that b >= 0.
  Eigen::MatrixXd a(mi, ni);
  Eigen::VectorXd b(mi);
  for (Index i = 0; i < mi; ++i) {
    for (Index j = 0; j < ni; ++j) a(i, j) = lp.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    b(i) = lp.b[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd row_scale(mi), col_scale(ni);
  for (Index i = 0; i < mi; ++i) {
    const double big = a.row(i).cwiseAbs().maxCoeff();
    double s = big > 0.0 ? 1.0 / big : 1.0;
    if (b(i) * s < 0.0) s = -s;
    row_scale(i) = s;
    a.row(i) *= s;
    b(i) *= s;
  }
  for (Index j = 0; j < ni; ++j) {
    const double big = mi > 0 ? a.col(j).cwiseAbs().maxCoeff() : 0.0;
    col_scale(j) = big > 0.0 ? 1.0 / big : 1.0;
    a.col(j) *= col_scale(j);
  }

  LpResult out;
  RevisedSimplex rs(a, b);
  const auto run = [&](const Eigen::VectorXd& cost) {
    while (true) {
      const auto st = rs.step(cost, tol);
      if (st != RevisedSimplex::Step::pivoted) return st;
      if (++out.pivots > max_pivots) return st;
    }
  };

  // Phase 1: minimize the sum of artificials.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ni + mi);
  cost.tail(mi).setOnes();
  run(cost);
  if (out.pivots > max_pivots) {
    out.status = LpStatus::iteration_limit;
    return out;
  }
  const double bnorm = mi > 0 ? b.cwiseAbs().maxCoeff() : 0.0;
  if (rs.objective(cost) > tol * std::max(1.0, bnorm)) {
    // Phase-1 duals y satisfy y^T A <= 0 and y^T b > 0 on the scaled system; flip and unscale.
    const Eigen::VectorXd y = rs.duals(cost);
    out.status = LpStatus::infeasible;
    out.certificate.resize(m);
    for (Index i = 0; i < mi; ++i) out.certificate[static_cast<std::size_t>(i)] = -y(i) * row_scale(i);
    return out;
  }
  out.pivots += rs.drive_out_artificials(tol);

  // Phase 2: artificial columns may no longer enter.
  cost.setZero();
  for (Index j = 0; j < ni && !lp.c.empty(); ++j) cost(j) = -lp.c[static_cast<std::size_t>(j)] * col_scale(j);
  const auto st = run(cost);
  if (out.pivots > max_pivots) {
    out.status = LpStatus::iteration_limit;
    return out;
  }
  if (st == RevisedSimplex::Step::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }

  // Re-solve B x_B = b in the original (unscaled) matrix.
  std::vector<std::size_t> cols;
  for (Index j : rs.basis())
    if (j < ni) cols.push_back(static_cast<std::size_t>(j));
  out.x.assign(n, 0.0);
  if (!cols.empty()) {
    Eigen::MatrixXd basis(mi, static_cast<Index>(cols.size()));
    Eigen::VectorXd rhs(mi);
    for (Index i = 0; i < mi; ++i) {
      rhs(i) = lp.b[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < cols.size(); ++k)
        basis(i, static_cast<Index>(k)) = lp.at(static_cast<std::size_t>(i), cols[k]);
    }
    const Eigen::VectorXd xb = basis.colPivHouseholderQr().solve(rhs);
    for (std::size_t k = 0; k < cols.size(); ++k) out.x[cols[k]] = std::max(0.0, xb(static_cast<Index>(k)));
  }
  for (std::size_t i = 0; i < m; ++i) {
    double r = -lp.b[i];
    for (std::size_t j = 0; j < n; ++j) r += lp.at(i, j) * out.x[j];
    out.primal_residual = std::max(out.primal_residual, std::abs(r));
  }
  out.objective = 0.0;
  for (std::size_t j = 0; j < n && !lp.c.empty(); ++j) out.objective += lp.c[j] * out.x[j];
  out.status = LpStatus::optimal;
  return out;
}

}  // namespace fluctwork
