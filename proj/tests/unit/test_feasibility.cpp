#include <gtest/gtest.h>

#include <cmath>

#include "../common/instances.hpp"
#include "fluctwork/errors.hpp"
#include "fluctwork/feasibility.hpp"
#include "fluctwork/gibbs_kernel.hpp"
#include "../common/oracles.hpp"

using namespace fluctwork;

namespace {

FeasibilityProblem noisy_erasure() {
  const auto flat = EnergySpectrum::from_energies(std::vector<double>{0.0, 0.0});
  const double ws = std::log(1.0 / 1.8), wf = std::log(5.0);
  return FeasibilityProblem{ThermalContext(1.0), flat, DiagState({0.5, 0.5}), flat, DiagState({0.9, 0.1}),
                            WorkGrid({-1.0, ws, 0.0, wf}), std::nullopt, std::nullopt};
}

double max_dev(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x - 1));
  return m;
}

}  // namespace

TEST(Feasibility, ReturnedKernelSatisfiesAllConstraints) {
  const auto problem = noisy_erasure();
  const LPSolution sol = feasible_lp(problem);
  ASSERT_EQ(sol.status, FeasibilityStatus::feasible);
  const WorkKernel& k = *sol.kernel;
  EXPECT_LT(max_dev(oracle::gibbs_sums(k, 1.0)), 1e-12);
  EXPECT_LT(k.max_row_deviation(), 1e-12);
  const auto q = oracle::final_marginal(k, {0.5, 0.5});
  EXPECT_NEAR(q[0], 0.9, 1e-12);
}

TEST(Feasibility, OptimalWorkReachesFreeEnergyWhenGridAllows) {
  const LPSolution sol = optimal_expected_work(noisy_erasure());
  ASSERT_EQ(sol.status, FeasibilityStatus::optimal);
  const double df = oracle::free_energy({0, 0}, {0.5, 0.5}, 1.0) - oracle::free_energy({0, 0}, {0.9, 0.1}, 1.0);
  EXPECT_NEAR(sol.free_energy_bound, df, 1e-14);
  EXPECT_NEAR(sol.objective, df, 1e-9);
  EXPECT_GE(sol.gap, -1e-9);
}

TEST(Feasibility, PerfectErasureNeedsUnboundedWork) {
  // With finite work values the unreachable final level breaks the Gibbs condition.
  auto problem = noisy_erasure();
  problem.final_state = DiagState({1.0, 0.0});
  const LPSolution sol = feasible_lp(problem);
  EXPECT_EQ(sol.status, FeasibilityStatus::infeasible);
  EXPECT_FALSE(sol.certificate.empty());
}

TEST(Feasibility, WorkMarginalConstraint) {
  auto problem = noisy_erasure();
  problem.work_marginal = std::vector<double>{0.0, 0.9, 0.0, 0.1};
  EXPECT_EQ(feasible_lp(problem).status, FeasibilityStatus::feasible);
  problem.work_marginal = std::vector<double>{0.0, 0.0, 1.0, 0.0};
  EXPECT_EQ(feasible_lp(problem).status, FeasibilityStatus::infeasible);
  problem.work_marginal = std::vector<double>{1.0};
  EXPECT_THROW(feasible_lp(problem), DimensionError);
}

TEST(Feasibility, LpAgreesWithCurveCriterion) {
  int feasible = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto in = testgen::shift_instance(seed);
    const bool curve = feasible_with_shift(in.rho, in.initial, in.sigma, in.final, in.shift, in.ctx);
    const bool lp = feasible_lp(testgen::shift_problem(in)).status == FeasibilityStatus::feasible;
    EXPECT_EQ(curve, lp) << "seed " << seed;
    feasible += lp;
  }
  EXPECT_GT(feasible, 20);
  EXPECT_LT(feasible, 110);
}

TEST(Feasibility, OptimalWorkNeverBeatsFreeEnergy) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto in = testgen::shift_instance(seed);
    auto problem = testgen::shift_problem(in);
    problem.shift_support.reset();
    const LPSolution sol = optimal_expected_work(problem);
    if (sol.status != FeasibilityStatus::optimal) continue;
    EXPECT_LE(sol.objective, sol.free_energy_bound + 1e-9) << "seed " << seed;
  }
}

TEST(Feasibility, ErasureOptimumApproachesLandauerAsGridRefines) {
  const double landauer = -std::log(2.0);
  for (double h : {0.5, 0.25, 0.125}) {
    const LPSolution sol = optimal_expected_work(testgen::erasure_problem(1e-6, h));
    ASSERT_EQ(sol.status, FeasibilityStatus::optimal) << "h = " << h;
    EXPECT_LE(std::abs(sol.objective - landauer), h) << "h = " << h;
    EXPECT_LE(sol.objective, sol.free_energy_bound + 1e-9);
  }
}
