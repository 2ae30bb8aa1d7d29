#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fluctwork/thermo_core.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

inline constexpr double kIdentityTolerance = 1e-10;

struct IdentityReport {
  std::string name;
  double computed = 0.0;
  double target = 0.0;
  double abs_error = 0.0;
  bool pass = false;
};

IdentityReport make_report(std::string name, double computed, double target, double tol);

// Second-law equality, generalized Jarzynski, standard Jarzynski (thermal
// states only) and the signed second-law slack F(rho) - F(rho') - <w>.
// Exponential averages use cancelled forms, so zero-probability levels never
// produce ln 0. The generalized Jarzynski sum runs over every initial level
// (the full-rank limit), which is what forces the value Z'.
std::vector<IdentityReport> classical_identities(const DiagState& state, const WorkKernel& kernel,
                                                 const ThermalContext& ctx, double tol = kIdentityTolerance);

// Looks up a report by name; throws ArgumentError when absent.
const IdentityReport& find_report(const std::vector<IdentityReport>& reports, const std::string& name);

struct MomentSum {
  int order = 0;               // odd N
  double partial_sum = 0.0;    // sum_{k=1}^N beta^k / k! <v^k>
};

// Truncations of <exp(beta v)> - 1 at every odd order up to n_max, with
// v = f_s' - f_s + w over the joint distribution. Each should be <= 0.
std::vector<MomentSum> moment_inequalities(const DiagState& state, const WorkKernel& kernel,
                                           const ThermalContext& ctx, int n_max);

// F(rho) - F(rho') - <w>; nonnegative for Gibbs-stochastic kernels.
double second_law_slack(const DiagState& state, const WorkKernel& kernel, const ThermalContext& ctx);

struct CrooksRow {
  std::size_t s = 0;
  std::size_t s_prime = 0;
  double w = 0.0;
  double p_forward = 0.0;  // P(s', w | s) e^{-beta E_s} / Z
  double p_back = 0.0;     // P_back(s, -w | s') e^{-beta E'_s'} / Z'
  double ratio_residual = 0.0;
};

struct CrooksAggregate {
  double w = 0.0;
  double p_forward = 0.0;
  double p_back = 0.0;  // evaluated at -w
  double ratio_residual = 0.0;
};

struct CrooksTable {
  std::vector<CrooksRow> rows;
  std::vector<CrooksAggregate> aggregate;
  double max_row_residual = 0.0;
  double max_aggregate_residual = 0.0;
  bool pass = false;
};

// Checks p_forward / p_back = e^{-beta w} Z'/Z per (s, s', w) and summed over
// (s, s'). Residuals are relative: |a - b| / max(a, b) with a = p_forward
// e^{beta w} Z/Z' and b = p_back, zero when both vanish.
CrooksTable crooks_table(const WorkKernel& kernel, const ThermalContext& ctx, double tol = kIdentityTolerance);

struct ReversibilityReport {
  bool reversible = false;
  double max_deviation = 0.0;  // max |w - (f_s - f_s')| over positive joint probability
  double first_moment = 0.0;   // beta <v>
};

ReversibilityReport reversibility_check(const DiagState& state, const WorkKernel& kernel, const ThermalContext& ctx,
                                        double tol = kIdentityTolerance);

// Erasure of a degenerate qubit: success lands in level 0 with work w0 / w1
// from levels 0 / 1, failure lands in level 1 with wbar0 / wbar1.
struct LandauerSpec {
  double epsilon = 0.0;
  double w0 = 0.0;
  double w1 = 0.0;
  double wbar0 = 0.0;
  double wbar1 = 0.0;
};

struct LandauerConstraintCheck {
  double success_residual = 0.0;  // |(1-eps)(e^{beta w0} + e^{beta w1}) - 1|
  double failure_residual = 0.0;  // |eps (e^{beta wbar0} + e^{beta wbar1}) - 1|, 0 at eps = 0
  bool pass = false;
};

LandauerConstraintCheck check_landauer(const LandauerSpec& spec, const ThermalContext& ctx, double tol = 1e-10);

// Mean work from the uniform initial state; positive means yield.
double landauer_mean_work(const LandauerSpec& spec);

// The kernel on E = E' = (0, 0) described by a spec.
WorkKernel landauer_kernel(const LandauerSpec& spec);

// Symmetric failure-branch work T ln(1/(2 eps)); empty at eps = 0.
std::optional<double> landauer_failure_work(double epsilon, const ThermalContext& ctx);

struct LandauerPoint {
  double w0 = 0.0;
  double w1 = 0.0;  // NaN when infeasible
  bool feasible = false;
  double mean_work = 0.0;  // yield sign convention
  double mean_cost = 0.0;  // -mean_work
};

struct LandauerCurve {
  double epsilon = 0.0;
  std::vector<LandauerPoint> points;
  std::optional<double> failure_work;
  std::optional<std::size_t> optimum;  // feasible point of least cost
  bool domain_negative = false;        // every feasible w0, w1 < 0 (meaningful at eps = 0)
};

LandauerCurve landauer_tradeoff(double epsilon, const ThermalContext& ctx, const std::vector<double>& w0_grid);

// n uniform points on [w_max - 6T, w_max) plus the symmetric point, sorted,
// where w_max = T ln(1/(1-eps)) is the edge of the success-branch domain.
std::vector<double> landauer_sweep_grid(double epsilon, const ThermalContext& ctx, std::size_t n = 240);

}  // namespace fluctwork
