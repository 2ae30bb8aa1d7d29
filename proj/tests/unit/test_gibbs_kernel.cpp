#include <gtest/gtest.h>

#include <cmath>

#include "fluctwork/diagnostics.hpp"
#include "fluctwork/errors.hpp"
#include "fluctwork/gibbs_kernel.hpp"
#include "fluctwork/sweep.hpp"
#include "../common/oracles.hpp"

using namespace fluctwork;

namespace {

double max_dev(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - 1.0));
  return m;
}

class QuietWarnings : public ::testing::Test {
 protected:
  void SetUp() override { old_ = set_warning_sink({}); }
  void TearDown() override { set_warning_sink(old_); }
  WarningSink old_;
};

}  // namespace

TEST(GibbsKernel, AnalyticKernelsPass) {
  const ThermalContext ctx(1.3);
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 0.4, 2.0});
  const auto h2 = EnergySpectrum::from_energies(std::vector<double>{0.5, -0.2, 1.0});
  for (const WorkKernel& k : {identity_kernel(h), thermal_reset_kernel(h, ctx), level_transformation_kernel(h, h2)}) {
    const auto v = validate_gibbs_stochastic(k, ctx, 1e-12);
    EXPECT_TRUE(v.pass);
    EXPECT_LT(v.max_gibbs_deviation, 1e-12);
    EXPECT_LT(max_dev(oracle::gibbs_sums(k, 1.3)), 1e-12);
  }
}

TEST(GibbsKernel, IdentityIsExact) {
  const auto v = validate_gibbs_stochastic(identity_kernel(EnergySpectrum::from_energies(std::vector<double>{0, 3})),
                                           ThermalContext(2.0), 0.0);
  EXPECT_EQ(v.max_gibbs_deviation, 0.0);
  EXPECT_EQ(v.max_row_deviation, 0.0);
}

TEST(GibbsKernel, LevelTransformationWorkIsEnergyDifference) {
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const auto h2 = EnergySpectrum::from_energies(std::vector<double>{0.25, 3.0});
  const auto k = level_transformation_kernel(h, h2);
  for (const auto& e : k.entries()) {
    EXPECT_EQ(e.s, e.s_prime);
    EXPECT_NEAR(k.grid()[e.w], h.energy(e.s) - h2.energy(e.s), 1e-15);
  }
  EXPECT_THROW(level_transformation_kernel(h, EnergySpectrum::from_energies(std::vector<double>{0})), DimensionError);
}

TEST(GibbsKernel, ConstructedViolationIsReported) {
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  WorkKernel k(h, h, WorkGrid({0.0}));
  k.set(0, 0, 0, 1.0);
  k.set(1, 0, 0, 1.0);  // everything to the ground state for free
  const auto v = validate_gibbs_stochastic(k, ThermalContext(1.0), 1e-12);
  EXPECT_FALSE(v.pass);
  EXPECT_NEAR(v.gibbs_sums[0], 1.0 + std::exp(-1.0), 1e-15);
  EXPECT_NEAR(v.gibbs_sums[1], 0.0, 1e-15);
}

TEST(GibbsKernel, RandomKernelsAreGibbsStochastic) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const RandomInstance in = make_random_instance(seed);
    const double beta = in.ctx.beta();
    EXPECT_LT(max_dev(oracle::gibbs_sums(in.kernel, beta)), 1e-12) << "seed " << seed;
    EXPECT_LT(in.kernel.max_row_deviation(), 1e-12) << "seed " << seed;
    EXPECT_LE(in.kernel.grid().size(), 9u);
  }
}

TEST(GibbsKernel, RandomKernelIsSeedDeterministic) {
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 0.5});
  const WorkGrid g({-1.0, 0.0, 1.0});
  const ThermalContext ctx(1.0);
  EXPECT_TRUE(random_kernel(h, h, g, ctx, 5) == random_kernel(h, h, g, ctx, 5));
  EXPECT_FALSE(random_kernel(h, h, g, ctx, 5) == random_kernel(h, h, g, ctx, 6));
}

TEST(GibbsKernel, BackwardMatchesReweightingFormula) {
  const RandomInstance in = make_random_instance(17);
  const double beta = in.ctx.beta();
  const WorkKernel back = backward_kernel(in.kernel, in.ctx);
  const auto& k = in.kernel;
  // P~(s, -w | s') = P(s', w | s) exp(beta (E'_s' - E_s + w))
  for (std::size_t s = 0; s < k.initial().size(); ++s)
    for (std::size_t t = 0; t < k.final().size(); ++t)
      for (std::size_t w = 0; w < k.grid().size(); ++w) {
        const double expected =
            k.at(s, t, w) * std::exp(beta * (k.final().energy(t) - k.initial().energy(s) + k.grid()[w]));
        const auto wb = back.grid().find(-k.grid()[w]);
        ASSERT_TRUE(wb.has_value());
        EXPECT_NEAR(back.at(t, s, *wb), expected, 1e-14);
      }
  const auto v = validate_gibbs_stochastic(back, in.ctx, 1e-12);
  EXPECT_TRUE(v.pass);
  EXPECT_TRUE(backward_kernel(back, in.ctx) == k);
}

TEST_F(QuietWarnings, BackwardOfInvalidKernelWarns) {
  std::vector<std::string> seen;
  set_warning_sink([&](const std::string& m) { seen.push_back(m); });
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  WorkKernel k(h, h, WorkGrid({0.0}));
  k.set(0, 0, 0, 1.0);
  k.set(1, 0, 0, 1.0);
  (void)backward_kernel(k, ThermalContext(1.0));
  EXPECT_EQ(seen.size(), 1u);
}

TEST(GibbsKernel, MarginalsMatchOracle) {
  const RandomInstance in = make_random_instance(23);
  const Marginals m = marginals(in.state, in.kernel);
  const auto q = oracle::final_marginal(in.kernel, in.state.probs());
  for (std::size_t t = 0; t < q.size(); ++t) EXPECT_NEAR(m.final_state[t], q[t], 1e-13);  // marginals renormalizes away row-sum rounding
  const double mean = oracle::expect(in.kernel, in.state.probs(), [](auto, auto, double w) { return w; });
  EXPECT_NEAR(m.mean_work, mean, 1e-14);
}

TEST(Sweep, SerialAndParallelAgree) {
  const auto a = sweep_identities(100, 24, Exec::serial);
  const auto b = sweep_identities(100, 24, Exec::parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].second_law_error, b[i].second_law_error);
    EXPECT_EQ(a[i].crooks_residual, b[i].crooks_residual);
    EXPECT_TRUE(a[i].double_backward_exact);
  }
}
