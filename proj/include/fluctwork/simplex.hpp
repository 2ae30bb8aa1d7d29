#pragma once

#include <cstddef>
#include <vector>

namespace fluctwork {

inline constexpr double kSimplexTolerance = 1e-9;

// maximize c^T x subject to A x = b, x >= 0. A is dense, row-major.
struct LinearProgram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;  // empty means a pure feasibility problem

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  // When infeasible: y with y^T A >= 0 and y^T b < 0 (a Farkas certificate).
  std::vector<double> certificate;
  double primal_residual = 0.0;  // max |A x - b| of the returned x
  std::size_t pivots = 0;
};

// Two-phase revised simplex with Bland's rule. Rows and columns are
// equilibrated, the basis is refactorized every pivot, and the final basic
// solution is re-solved against the original matrix.
LpResult solve_lp(const LinearProgram& lp, double tol = kSimplexTolerance, std::size_t max_pivots = 200000);

}  // namespace fluctwork
