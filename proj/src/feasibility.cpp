#include "fluctwork/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "fluctwork/errors.hpp"
#include "fluctwork/gibbs_kernel.hpp"

namespace fluctwork {

namespace {

struct Layout {
  std::size_t d;
  std::size_t dp;
  std::size_t g;
  std::size_t index(std::size_t s, std::size_t sp, std::size_t k) const { return (s * dp + sp) * g + k; }
};

void check_problem(const FeasibilityProblem& p) {
  require_aligned(p.initial_state, p.initial_spectrum, "feasibility initial state");
  require_aligned(p.final_state, p.final_spectrum, "feasibility final state");
  if (p.work_marginal && p.work_marginal->size() != p.grid.size()) {
    throw DimensionError("work marginal is not aligned with the grid");
  }
  if (p.shift_support && (p.shift_support->gamma.size() != p.initial_spectrum.size() ||
                          p.shift_support->alpha.size() != p.final_spectrum.size())) {
    throw DimensionError("shift form does not match the spectra");
  }
}

bool allowed(const FeasibilityProblem& p, std::size_t s, std::size_t sp, std::size_t k) {
  if (!p.shift_support) return true;
  const double w = p.shift_support->alpha[sp] - p.shift_support->gamma[s];
  return std::abs(p.grid[k] - w) <= 1e-12 * std::max(1.0, std::abs(w));
}

LPSolution solve(const FeasibilityProblem& problem, bool with_objective) {
  check_problem(problem);
  const LinearProgram lp = build_program(problem, with_objective);
  const LpResult r = solve_lp(lp);
  LPSolution out;
  out.free_energy_bound = free_energy(problem.initial_spectrum, problem.ctx, problem.initial_state) -
                          free_energy(problem.final_spectrum, problem.ctx, problem.final_state);
  if (r.status == LpStatus::infeasible) {
    out.status = FeasibilityStatus::infeasible;
    out.certificate = r.certificate;
    return out;
  }
  if (r.status != LpStatus::optimal) {
    out.status = FeasibilityStatus::infeasible;
    out.warning = r.status == LpStatus::iteration_limit ? "simplex pivot limit reached" : "unbounded program";
    return out;
  }

  const Layout L{problem.initial_spectrum.size(), problem.final_spectrum.size(), problem.grid.size()};
  WorkKernel kernel(problem.initial_spectrum, problem.final_spectrum, problem.grid);
  for (std::size_t s = 0; s < L.d; ++s)
    for (std::size_t sp = 0; sp < L.dp; ++sp)
      for (std::size_t k = 0; k < L.g; ++k) {
        const double x = r.x[L.index(s, sp, k)];
        if (x > 0.0) kernel.set(s, sp, k, x);
      }
  const auto v = validate_gibbs_stochastic(kernel, problem.ctx, 1e-9);
  out.max_gibbs_deviation = v.max_gibbs_deviation;
  out.max_row_deviation = v.max_row_deviation;
  std::vector<double> reached(L.dp, 0.0);
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) {
    reached[sp] += problem.initial_state[s] * p;
    out.objective += problem.initial_state[s] * p * problem.grid[k];
  });
  for (std::size_t sp = 0; sp < L.dp; ++sp) {
    out.max_marginal_deviation = std::max(out.max_marginal_deviation, std::abs(reached[sp] - problem.final_state[sp]));
  }
  if (r.primal_residual > 1e-9) {
    out.warning = "ill-conditioned program: constraint residual " + std::to_string(r.primal_residual);
  }
  out.gap = out.free_energy_bound - out.objective;
  out.status = with_objective ? FeasibilityStatus::optimal : FeasibilityStatus::feasible;
  out.kernel = std::move(kernel);
  return out;
}

}  // namespace

LinearProgram build_program(const FeasibilityProblem& p, bool with_objective) {
  check_problem(p);
  const Layout L{p.initial_spectrum.size(), p.final_spectrum.size(), p.grid.size()};
  LinearProgram lp;
  lp.cols = L.d * L.dp * L.g;
  lp.rows = L.d + 2 * L.dp + (p.work_marginal ? L.g : 0);
  lp.a.assign(lp.rows * lp.cols, 0.0);
  lp.b.assign(lp.rows, 0.0);
  const double beta = p.ctx.beta();
  for (std::size_t s = 0; s < L.d; ++s)
    for (std::size_t sp = 0; sp < L.dp; ++sp)
      for (std::size_t k = 0; k < L.g; ++k) {
        if (!allowed(p, s, sp, k)) continue;
        const std::size_t j = L.index(s, sp, k);
        lp.at(s, j) = 1.0;
        lp.at(L.d + sp, j) =
            std::exp(beta * ((p.final_spectrum.energy(sp) - p.initial_spectrum.energy(s)) + p.grid[k]));
        lp.at(L.d + L.dp + sp, j) = p.initial_state[s];
        if (p.work_marginal) lp.at(L.d + 2 * L.dp + k, j) = p.initial_state[s];
      }
  for (std::size_t s = 0; s < L.d; ++s) lp.b[s] = 1.0;
  for (std::size_t sp = 0; sp < L.dp; ++sp) {
    lp.b[L.d + sp] = 1.0;
    lp.b[L.d + L.dp + sp] = p.final_state[sp];
  }
  if (p.work_marginal)
    for (std::size_t k = 0; k < L.g; ++k) lp.b[L.d + 2 * L.dp + k] = (*p.work_marginal)[k];
  if (with_objective) {
    lp.c.assign(lp.cols, 0.0);
    for (std::size_t s = 0; s < L.d; ++s)
      for (std::size_t sp = 0; sp < L.dp; ++sp)
        for (std::size_t k = 0; k < L.g; ++k)
          if (allowed(p, s, sp, k)) lp.c[L.index(s, sp, k)] = p.initial_state[s] * p.grid[k];
  }
  return lp;
}

LPSolution feasible_lp(const FeasibilityProblem& problem) { return solve(problem, false); }

LPSolution optimal_expected_work(const FeasibilityProblem& problem) { return solve(problem, true); }

}  // namespace fluctwork
