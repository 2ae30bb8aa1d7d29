#include "fluctwork/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "fluctwork/fluctuation_lab.hpp"
#include "fluctwork/gibbs_kernel.hpp"
#include "fluctwork/random.hpp"

namespace fluctwork {

namespace {

DiagState random_full_support_state(Rng& rng, std::size_t d) {
  std::vector<double> p(d);
  for (double& x : p) x = 0.05 + rng.uniform();
  return DiagState(std::move(p), true);
}

}  // namespace

RandomInstance make_random_instance(std::uint64_t seed) {
  Rng rng(seed);
  const ThermalContext ctx(rng.uniform(0.1, 5.0));
  const std::size_t d = 2 + rng.below(3);
  std::vector<double> e(d);
  std::vector<double> ep(d);
  for (double& x : e) x = rng.uniform();
  for (double& x : ep) x = rng.uniform();
  std::vector<double> w{-3.0, 3.0};
  const std::size_t interior = rng.below(8);
  for (std::size_t i = 0; i < interior; ++i) w.push_back(rng.uniform(-3.0, 3.0));
  const auto initial = EnergySpectrum::from_energies(e);
  const auto final = EnergySpectrum::from_energies(ep);
  WorkKernel kernel = random_kernel(initial, final, WorkGrid(w), ctx, Rng::stream_seed(seed, 1));
  DiagState state = random_full_support_state(rng, d);
  return RandomInstance{seed, ctx, std::move(kernel), std::move(state)};
}

SweepRecord evaluate_instance(const RandomInstance& in) {
  SweepRecord r;
  r.seed = in.seed;
  const auto v = validate_gibbs_stochastic(in.kernel, in.ctx, kIdentityTolerance);
  r.gibbs_deviation = v.max_gibbs_deviation;
  r.row_deviation = v.max_row_deviation;

  const auto ids = classical_identities(in.state, in.kernel, in.ctx);
  r.second_law_error = find_report(ids, "second_law_equality").abs_error;
  r.generalized_jarzynski_error = find_report(ids, "generalized_jarzynski").abs_error;
  const auto thermal = classical_identities(gibbs_state(in.kernel.initial(), in.ctx), in.kernel, in.ctx);
  r.standard_jarzynski_error = find_report(thermal, "standard_jarzynski").abs_error;

  const auto moments = moment_inequalities(in.state, in.kernel, in.ctx, 7);
  r.max_moment_sum = moments.front().partial_sum;
  for (const auto& m : moments) r.max_moment_sum = std::max(r.max_moment_sum, m.partial_sum);
  const double slack = second_law_slack(in.state, in.kernel, in.ctx);
  r.slack_consistency_error = std::abs(-in.ctx.temperature() * moments.front().partial_sum - slack);

  r.crooks_residual = crooks_table(in.kernel, in.ctx).max_row_residual;
  const WorkKernel back = backward_kernel(in.kernel, in.ctx);
  const auto bv = validate_gibbs_stochastic(back, in.ctx, kIdentityTolerance);
  r.backward_gibbs_deviation = bv.max_gibbs_deviation;
  r.backward_row_deviation = bv.max_row_deviation;
  r.double_backward_exact = backward_kernel(back, in.ctx) == in.kernel;
  return r;
}

std::vector<SweepRecord> sweep_identities(std::uint64_t first_seed, std::size_t count, Exec exec) {
  std::vector<SweepRecord> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = evaluate_instance(make_random_instance(first_seed + static_cast<std::uint64_t>(i)));
  }
  return out;
}

}  // namespace fluctwork
