#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fluctwork/errors.hpp"
#include "fluctwork/gibbs_kernel.hpp"
#include "fluctwork/sampling.hpp"
#include "fluctwork/sweep.hpp"
#include "../common/oracles.hpp"

using namespace fluctwork;

TEST(Sampling, SerialAndParallelAreIdentical) {
  const RandomInstance in = make_random_instance(8);
  const auto a = sample_trajectories(in.state, in.kernel, in.ctx, 42, 50000, Exec::serial);
  const auto b = sample_trajectories(in.state, in.kernel, in.ctx, 42, 50000, Exec::parallel);
  EXPECT_EQ(a.second_law.mean, b.second_law.mean);
  EXPECT_EQ(a.jarzynski.standard_error, b.jarzynski.standard_error);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].w, b.samples[i].w);
  const auto c = sample_trajectories(in.state, in.kernel, in.ctx, 43, 50000, Exec::serial);
  EXPECT_NE(a.second_law.mean, c.second_law.mean);
}

TEST(Sampling, EstimatesCoverExactValues) {
  // Tolerances come from the exact variance: the sample one underestimates heavy tails.
  constexpr std::int64_t n = 200000;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandomInstance in = make_random_instance(seed);
    const double beta = in.ctx.beta();
    const auto& p0 = in.state.probs();
    const auto q = oracle::final_marginal(in.kernel, p0);
    const auto bv = [&](std::size_t s, std::size_t t, double w) {
      return beta * (in.kernel.final().energy(t) - in.kernel.initial().energy(s) + w) + std::log(q[t]) - std::log(p0[s]);
    };
    const auto bj = [&](std::size_t s, std::size_t, double w) {
      return beta * (w - in.kernel.initial().energy(s)) - std::log(p0[s]);
    };
    const double m1 = oracle::expect(in.kernel, p0, [&](auto s, auto t, double w) { return std::exp(bv(s, t, w)); });
    const double m2 = oracle::expect(in.kernel, p0, [&](auto s, auto t, double w) { return std::exp(2 * bv(s, t, w)); });
    const double j1 = oracle::expect(in.kernel, p0, [&](auto s, auto t, double w) { return std::exp(bj(s, t, w)); });
    const double j2 = oracle::expect(in.kernel, p0, [&](auto s, auto t, double w) { return std::exp(2 * bj(s, t, w)); });
    const auto r = sample_trajectories(in.state, in.kernel, in.ctx, seed, n);
    EXPECT_LT(std::abs(r.second_law.mean - m1), 5.0 * std::sqrt((m2 - m1 * m1) / n) + 1e-12) << "seed " << seed;
    EXPECT_LT(std::abs(r.jarzynski.mean - j1), 5.0 * std::sqrt((j2 - j1 * j1) / n) + 1e-12) << "seed " << seed;
    EXPECT_NEAR(m1, 1.0, 1e-10);
    EXPECT_NEAR(j1, partition_function(in.kernel.final(), in.ctx), 1e-10 * j1);
  }
}

TEST(Sampling, EmpiricalFrequenciesMatchJointDistribution) {
  const RandomInstance in = make_random_instance(12);
  const std::int64_t n = 400000;
  // Only a prefix is kept; it is still an i.i.d. sample of the joint law.
  const auto r = sample_trajectories(in.state, in.kernel, in.ctx, 3, n);
  std::map<std::pair<std::size_t, std::size_t>, double> counts;
  for (const auto& t : r.samples) counts[{t.s, t.s_prime}] += 1.0;
  const double kept = static_cast<double>(r.samples.size());
  ASSERT_EQ(r.samples.size(), kMaxKeptSamples);
  for (std::size_t s = 0; s < in.kernel.initial().size(); ++s)
    for (std::size_t t = 0; t < in.kernel.final().size(); ++t) {
      double p = 0.0;
      for (std::size_t w = 0; w < in.kernel.grid().size(); ++w) p += in.state[s] * in.kernel.at(s, t, w);
      const double sd = std::sqrt(p * (1 - p) / kept);
      EXPECT_NEAR((counts[{s, t}] / kept), p, 5 * sd + 1e-12);
    }
  for (const auto& t : r.samples) {
    const auto f = fine_grained_free_energy(in.state, in.kernel.initial(), in.ctx);
    const auto fp = fine_grained_free_energy(marginals(in.state, in.kernel).final_state, in.kernel.final(), in.ctx);
    EXPECT_NEAR(t.v, fp.values[t.s_prime] - f.values[t.s] + t.w, 1e-12);
  }
}

TEST(Sampling, RequiresFullSupport) {
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const ThermalContext ctx(1.0);
  EXPECT_THROW(sample_trajectories(DiagState({1.0, 0.0}), thermal_reset_kernel(h, ctx), ctx, 0, 100), PreconditionError);
  EXPECT_THROW(sample_trajectories(DiagState({0.5, 0.5}), thermal_reset_kernel(h, ctx), ctx, 0, 0), ArgumentError);
}

TEST(Sampling, SmallSamplesAreFlaggedUnreliable) {
  const RandomInstance in = make_random_instance(2);
  const auto r = sample_trajectories(in.state, in.kernel, in.ctx, 0, 10);
  EXPECT_FALSE(r.second_law.reliable);
}
