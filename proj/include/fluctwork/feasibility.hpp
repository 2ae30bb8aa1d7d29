#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluctwork/majorize.hpp"
#include "fluctwork/simplex.hpp"
#include "fluctwork/thermo_core.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

// Does a Gibbs-stochastic kernel on `grid` take rho to sigma?
struct FeasibilityProblem {
  ThermalContext ctx;
  EnergySpectrum initial_spectrum;
  DiagState initial_state;
  EnergySpectrum final_spectrum;
  DiagState final_state;
  WorkGrid grid;
  // Optional equality constraint on the work marginal, aligned with the grid.
  std::optional<std::vector<double>> work_marginal;
  // When set, only w = alpha_s' - gamma_s (within 1e-12) is allowed for (s, s').
  std::optional<WorkShiftForm> shift_support;
};

enum class FeasibilityStatus { feasible, infeasible, optimal };

struct LPSolution {
  FeasibilityStatus status = FeasibilityStatus::infeasible;
  std::optional<WorkKernel> kernel;
  double objective = 0.0;          // <w> of the returned kernel
  std::vector<double> certificate;  // Farkas multipliers per constraint row when infeasible
  double free_energy_bound = 0.0;   // F(rho) - F(sigma)
  double gap = 0.0;                 // bound - objective
  double max_gibbs_deviation = 0.0;
  double max_row_deviation = 0.0;
  double max_marginal_deviation = 0.0;
  std::string warning;              // numerical trouble, if any
};

// Constraint rows, in order: row sums (d), Gibbs sums (d'), final marginal (d'),
// then the work marginal (G) when given.
LinearProgram build_program(const FeasibilityProblem& problem, bool with_objective);

LPSolution feasible_lp(const FeasibilityProblem& problem);
// Maximizes <w> = sum_s P(s) P(s', w | s) w over the same polytope.
LPSolution optimal_expected_work(const FeasibilityProblem& problem);

}  // namespace fluctwork
