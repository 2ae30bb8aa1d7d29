#include "fluctwork/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "fluctwork/errors.hpp"
#include "fluctwork/gibbs_kernel.hpp"
#include "fluctwork/random.hpp"

namespace fluctwork {

namespace {

struct Outcome {
  std::size_t s;
  std::size_t s_prime;
  double w;
  double beta_v;
  double beta_jarzynski;  // beta (w - f_s)
};

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Accumulator& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

struct StreamResult {
  Accumulator second_law;
  Accumulator jarzynski;
  std::vector<TrajectorySample> kept;
};

MonteCarloEstimate finish(const Accumulator& acc, std::uint64_t n) {
  MonteCarloEstimate e;
  const double dn = static_cast<double>(n);
  e.mean = acc.sum / dn;
  const double var = n > 1 ? std::max(0.0, (acc.sum_sq - dn * e.mean * e.mean) / (dn - 1.0)) : 0.0;
  e.standard_error = std::sqrt(var / dn);
  e.effective_fraction = acc.sum_sq > 0.0 ? acc.sum * acc.sum / (dn * acc.sum_sq) : 0.0;
  e.reliable = n >= kMinReliableSamples && e.effective_fraction >= kMinEffectiveFraction;
  return e;
}

}  // namespace

SamplingReport sample_trajectories(const DiagState& state, const WorkKernel& kernel, const ThermalContext& ctx,
                                   std::uint64_t seed, std::int64_t n, Exec exec, std::size_t streams) {
  if (n <= 0) throw ArgumentError("sample count must be positive");
  if (streams == 0) throw ArgumentError("stream count must be positive");
  require_aligned(state, kernel.initial(), "sampling");
  if (!state.full_support()) {
    throw PreconditionError("sampling needs a full-support initial state (f_s must be finite)");
  }
  const Marginals m = marginals(state, kernel);
  const double beta = ctx.beta();
  const auto& ei = kernel.initial().energies();
  const auto& ef = kernel.final().energies();

  std::vector<Outcome> outcomes;
  std::vector<double> cdf;
  double total = 0.0;
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) {
    const double joint = state[s] * p;
    if (joint <= 0.0) return;
    const double w = kernel.grid()[k];
    const double bv = beta * ((ef[sp] - ei[s]) + w) + std::log(m.final_state[sp]) - std::log(state[s]);
    const double bj = beta * (w - ei[s]) - std::log(state[s]);
    outcomes.push_back({s, sp, w, bv, bj});
    total += joint;
    cdf.push_back(total);
  });

  const auto count = static_cast<std::uint64_t>(n);
  const std::uint64_t chunk = count / streams;
  const std::uint64_t extra = count % streams;
  std::vector<StreamResult> results(streams);
  const auto num_streams = static_cast<std::int64_t>(streams);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::int64_t i = 0; i < num_streams; ++i) {
    const auto ui = static_cast<std::uint64_t>(i);
    const std::uint64_t begin = ui * chunk + std::min(ui, extra);
    const std::uint64_t size = chunk + (ui < extra ? 1 : 0);
    Rng rng(Rng::stream_seed(seed, ui));
    StreamResult& r = results[static_cast<std::size_t>(i)];
    for (std::uint64_t j = 0; j < size; ++j) {
      const double u = rng.uniform() * total;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), outcomes.size() - 1);
      const Outcome& o = outcomes[idx];
      r.second_law.add(std::exp(o.beta_v));
      r.jarzynski.add(std::exp(o.beta_jarzynski));
      if (begin + j < kMaxKeptSamples) r.kept.push_back({o.s, o.s_prime, o.w, o.beta_v / beta});
    }
  }

  SamplingReport report;
  report.n = count;
  report.streams = streams;
  Accumulator second_law;
  Accumulator jarzynski;
  for (const auto& r : results) {
    second_law.merge(r.second_law);
    jarzynski.merge(r.jarzynski);
    report.samples.insert(report.samples.end(), r.kept.begin(), r.kept.end());
  }
  report.second_law = finish(second_law, count);
  report.jarzynski = finish(jarzynski, count);
  return report;
}

}  // namespace fluctwork
