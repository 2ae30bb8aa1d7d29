#pragma once

#include <cstdint>
#include <vector>

#include "fluctwork/parallel.hpp"
#include "fluctwork/thermo_core.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

// One member of the property-test family: d = d' in {2, 3, 4}, energies in
// [0, 1], a grid of 2..9 work values in [-3, 3] that always contains both
// endpoints, beta in [0.1, 5], a random_kernel and a random full-support state.
struct RandomInstance {
  std::uint64_t seed = 0;
  ThermalContext ctx;
  WorkKernel kernel;
  DiagState state;
};

RandomInstance make_random_instance(std::uint64_t seed);

// Worst-case errors of every classical identity on one instance.
struct SweepRecord {
  std::uint64_t seed = 0;
  double gibbs_deviation = 0.0;
  double row_deviation = 0.0;
  double second_law_error = 0.0;
  double generalized_jarzynski_error = 0.0;
  double standard_jarzynski_error = 0.0;  // evaluated from the initial Gibbs state
  double max_moment_sum = 0.0;            // over N in {1, 3, 5, 7}
  double slack_consistency_error = 0.0;   // |-T * (N=1 sum) - slack|
  double crooks_residual = 0.0;
  double backward_gibbs_deviation = 0.0;
  double backward_row_deviation = 0.0;
  bool double_backward_exact = false;
};

SweepRecord evaluate_instance(const RandomInstance& instance);

// Records for seeds first_seed .. first_seed + count - 1, in seed order.
std::vector<SweepRecord> sweep_identities(std::uint64_t first_seed, std::size_t count, Exec exec = Exec::parallel);

}  // namespace fluctwork
