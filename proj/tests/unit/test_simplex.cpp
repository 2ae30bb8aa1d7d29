#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <functional>
#include <optional>

#include "fluctwork/random.hpp"
#include "fluctwork/simplex.hpp"

using namespace fluctwork;

namespace {

// Brute force over every basis: solve B x_B = b, keep nonnegative solutions, return the best objective.
std::optional<double> vertex_enumeration(const LinearProgram& lp) {
  const std::size_t m = lp.rows, n = lp.cols;
  std::optional<double> best;
  std::vector<std::size_t> pick(m);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == m) {
      Eigen::MatrixXd b(m, m);
      Eigen::VectorXd rhs(m);
      for (std::size_t i = 0; i < m; ++i) {
        rhs(i) = lp.b[i];
        for (std::size_t j = 0; j < m; ++j) b(i, j) = lp.at(i, pick[j]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
      if (lu.rank() < static_cast<Eigen::Index>(m)) return;
      const Eigen::VectorXd xb = lu.solve(rhs);
      if (xb.minCoeff() < -1e-10) return;
      double obj = 0.0;
      for (std::size_t j = 0; j < m; ++j) obj += lp.c[pick[j]] * xb(j);
      if (!best || obj > *best) best = obj;
      return;
    }
    for (std::size_t j = start; j < n; ++j) {
      pick[depth] = j;
      rec(depth + 1, j + 1);
    }
  };
  rec(0, 0);
  return best;
}

// Bounded random LP: last row is sum x = total, so the feasible set is a polytope.
LinearProgram random_lp(Rng& rng, std::size_t m, std::size_t n) {
  LinearProgram lp{m, n, std::vector<double>(m * n), std::vector<double>(m), std::vector<double>(n)};
  std::vector<double> x0(n);
  for (double& x : x0) x = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.1, 2.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) lp.at(i, j) = i + 1 == m ? 1.0 : rng.uniform(-1.0, 2.0);
    double bi = 0.0;
    for (std::size_t j = 0; j < n; ++j) bi += lp.at(i, j) * x0[j];
    lp.b[i] = bi;
  }
  for (double& c : lp.c) c = rng.uniform(-1.0, 1.0);
  return lp;
}

}  // namespace

TEST(Simplex, MatchesVertexEnumeration) {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const LinearProgram lp = random_lp(rng, 3 + trial % 2, 7);
    const auto oracle = vertex_enumeration(lp);
    const LpResult r = solve_lp(lp);
    ASSERT_TRUE(oracle.has_value());  // x0 is feasible by construction
    ASSERT_EQ(r.status, LpStatus::optimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, *oracle, 1e-8 * std::max(1.0, std::abs(*oracle))) << "trial " << trial;
    EXPECT_LT(r.primal_residual, 1e-9);
    for (double x : r.x) EXPECT_GE(x, -1e-12);
    ++checked;
  }
  EXPECT_EQ(checked, 150);
}

TEST(Simplex, FarkasCertificateForInfeasibleSystem) {
  // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold.
  LinearProgram lp{2, 2, {1, 1, 1, 1}, {1, 2}, {}};
  const LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::infeasible);
  ASSERT_EQ(r.certificate.size(), 2u);
  double yb = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    double ya = 0.0;
    for (std::size_t i = 0; i < 2; ++i) ya += r.certificate[i] * lp.at(i, j);
    EXPECT_GE(ya, -1e-9);
  }
  for (std::size_t i = 0; i < 2; ++i) yb += r.certificate[i] * lp.b[i];
  EXPECT_LT(yb, -1e-9);
}

TEST(Simplex, NegativityInfeasible) {
  // x1 - x2 = -1 with x1 = 0 forces x2 = 1; adding x2 = 0 breaks it.
  LinearProgram lp{2, 2, {1, -1, 0, 1}, {-1, 0}, {}};
  EXPECT_EQ(solve_lp(lp).status, LpStatus::infeasible);
}

TEST(Simplex, DetectsUnbounded) {
  LinearProgram lp{1, 2, {1, -1}, {0}, {1, 0}};
  EXPECT_EQ(solve_lp(lp).status, LpStatus::unbounded);
}

TEST(Simplex, RedundantRowsAreTolerated) {
  LinearProgram lp{3, 3, {1, 1, 1, 2, 2, 2, 1, 0, 0}, {1, 2, 0.25}, {0, 1, 0}};
  const LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 0.75, 1e-12);
}
