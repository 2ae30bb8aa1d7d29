#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fluctwork/parallel.hpp"
#include "fluctwork/thermo_core.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

struct TrajectorySample {
  std::size_t s = 0;
  std::size_t s_prime = 0;
  double w = 0.0;
  double v = 0.0;  // f_s' - f_s + w
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  // (sum x)^2 / (n sum x^2); small values signal a heavy tail.
  double effective_fraction = 0.0;
  bool reliable = false;
};

struct SamplingReport {
  std::uint64_t n = 0;
  std::size_t streams = 0;
  std::vector<TrajectorySample> samples;  // the first few, in stream order
  MonteCarloEstimate second_law;          // <exp(beta v)>, target 1
  MonteCarloEstimate jarzynski;           // <exp(beta (w - f_s))>, target Z'
};

inline constexpr std::size_t kDefaultSampleStreams = 16;
inline constexpr std::size_t kMaxKeptSamples = 1000;
inline constexpr std::uint64_t kMinReliableSamples = 30;
inline constexpr double kMinEffectiveFraction = 0.01;

// Inverse-CDF sampling of (s, s', w) over the lexicographically ordered joint
// distribution. The n draws are split into `streams` contiguous chunks, each
// with its own seed derived from (seed, chunk), and merged in chunk order, so
// serial and parallel runs agree bit for bit.
SamplingReport sample_trajectories(const DiagState& state, const WorkKernel& kernel, const ThermalContext& ctx,
                                   std::uint64_t seed, std::int64_t n, Exec exec = Exec::parallel,
                                   std::size_t streams = kDefaultSampleStreams);

}  // namespace fluctwork
