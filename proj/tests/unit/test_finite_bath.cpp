#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "fluctwork/errors.hpp"
#include "fluctwork/finite_bath.hpp"
#include "fluctwork/gibbs_kernel.hpp"

using namespace fluctwork;

namespace {

struct Small {
  ThermalContext ctx{1.0};
  BathModel bath = BathModel::canonical(ctx, 6);
  double d = bath.delta;
  EnergySpectrum h = EnergySpectrum::from_energies(std::vector<double>{0.0, 2 * d});
  WorkGrid grid{{-2 * d, 0.0, 2 * d}};
  std::vector<int> e{0, 2};      // energies in units of delta
  std::vector<int> w{-2, 0, 2};  // grid in units of delta
};

}  // namespace

TEST(FiniteBath, CanonicalDegeneracy) {
  const BathModel b = BathModel::canonical(ThermalContext(2.0), 5);
  EXPECT_NEAR(2.0 * b.delta, std::log(2.0), 1e-15);
  EXPECT_EQ(b.degeneracy(-5), 1u);
  EXPECT_EQ(b.degeneracy(5), 1024u);
  EXPECT_THROW(b.degeneracy(6), ArgumentError);
}

TEST(FiniteBath, RandomDyadicKernelIsExactlyGibbs) {
  Small s;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WorkKernel k = random_dyadic_kernel(s.h, s.h, s.grid, s.ctx, 3, seed);
    // exact in integers: sum_s,w n * 2^(e'_t + w - e_s) == 2^D for every t
    for (std::size_t t = 0; t < 2; ++t) {
      double total = 0.0;
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t k3 = 0; k3 < 3; ++k3) {
          const double n = k.at(a, t, k3) * 8.0;
          EXPECT_EQ(n, std::floor(n));
          total += n * std::ldexp(1.0, s.e[t] + s.w[k3] - s.e[a]);
        }
      EXPECT_EQ(total, 8.0) << "seed " << seed;
    }
  }
}

// Enumerates every microstate of the truncated space and follows the map.
TEST(FiniteBath, BruteForceEnumeration) {
  Small s;
  const int D = 2;
  const int M = s.bath.half_range;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WorkKernel k = random_dyadic_kernel(s.h, s.h, s.grid, s.ctx, D, seed);
    const PermutationRealization r = realize_finite_bath(k, s.bath, s.ctx, D);

    std::set<std::tuple<std::size_t, int, std::uint64_t>> images;
    std::uint64_t total = 0, off_grid = 0;
    std::map<std::pair<std::size_t, int>, std::uint64_t> from_ground;  // (s', w) counts out of (s=*, j=0)
    for (std::size_t a = 0; a < 2; ++a)
      for (int j = -M; j <= M; ++j)
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (M + j)); ++idx) {
          ++total;
          const Microstate m = r.apply(Microstate{a, j, idx});
          ASSERT_LT(m.level, 2u);
          ASSERT_GE(m.bath_level, -M);
          ASSERT_LE(m.bath_level, M);
          ASSERT_LT(m.index, std::uint64_t{1} << (M + m.bath_level));
          images.insert({m.level, m.bath_level, m.index});
          const int work = s.e[a] + j - s.e[m.level] - m.bath_level;
          const bool on_grid = work == -2 || work == 0 || work == 2;
          if (!on_grid) ++off_grid;
          if (j == 0 && a == 0) ++from_ground[{m.level, work}];
        }
    EXPECT_EQ(images.size(), total) << "not injective";
    EXPECT_EQ(total, r.total_microstates);
    EXPECT_LE(off_grid, r.boundary_microstates);

    // Interior source level j = 0 of s = 0: counted fractions equal the dyadic entries.
    const std::uint64_t omega0 = std::uint64_t{1} << M;
    for (std::size_t t = 0; t < 2; ++t)
      for (std::size_t k3 = 0; k3 < 3; ++k3) {
        const double counted = static_cast<double>(from_ground[{t, s.w[k3]}]) / static_cast<double>(omega0);
        EXPECT_EQ(counted, r.dyadic.at(0, t, k3)) << "seed " << seed;
      }

    const RealizationCheck chk = verify_realization(r, k);
    EXPECT_TRUE(chk.pass(D));
    EXPECT_EQ(chk.max_error_vs_input, 0.0);
  }
}

TEST(FiniteBath, SerialAndParallelAgree) {
  Small s;
  const WorkKernel k = random_dyadic_kernel(s.h, s.h, s.grid, s.ctx, 3, 9);
  const auto a = realize_finite_bath(k, s.bath, s.ctx, 3, Exec::serial);
  const auto b = realize_finite_bath(k, s.bath, s.ctx, 3, Exec::parallel);
  ASSERT_EQ(a.segments.size(), b.segments.size());
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    EXPECT_EQ(a.segments[i].k_target, b.segments[i].k_target);
    EXPECT_EQ(a.segments[i].j_prime, b.segments[i].j_prime);
  }
  const auto ca = verify_realization(a, k, Exec::serial);
  const auto cb = verify_realization(a, k, Exec::parallel);
  EXPECT_EQ(ca.interior_targets, cb.interior_targets);
  EXPECT_EQ(ca.pass(3), cb.pass(3));
}

TEST(FiniteBath, RoundingErrorWithinDenominator) {
  Small s;
  // Identity mixed with an energy-conserving swap (work pays the gap): Gibbs-stochastic, not dyadic.
  WorkKernel k(s.h, s.h, s.grid);
  const double p = 0.3;
  k.set(0, 0, 1, 1.0 - p);
  k.set(0, 1, 0, p);
  k.set(1, 1, 1, 1.0 - p);
  k.set(1, 0, 2, p);
  ASSERT_TRUE(validate_gibbs_stochastic(k, s.ctx, 1e-12).pass);
  const auto r = realize_finite_bath(k, s.bath, s.ctx, 4);
  const auto chk = verify_realization(r, k);
  EXPECT_TRUE(chk.pass(4));
  EXPECT_GT(chk.max_error_vs_input, 0.0);
  EXPECT_LE(chk.max_error_vs_input, 1.0 / 16);
}

TEST(FiniteBath, Preconditions) {
  Small s;
  const WorkKernel k = random_dyadic_kernel(s.h, s.h, s.grid, s.ctx, 2, 1);
  EXPECT_THROW(realize_finite_bath(k, s.bath, ThermalContext(1.5), 2), PreconditionError);

  const auto off = EnergySpectrum::from_energies(std::vector<double>{0.0, 0.3});
  EXPECT_THROW(realize_finite_bath(identity_kernel(off), s.bath, s.ctx, 2), CommensurabilityError);

  const auto three = EnergySpectrum::from_energies(std::vector<double>{0.0, s.d, 2 * s.d});
  WorkKernel uneven(s.h, three, s.grid);
  EXPECT_THROW(realize_finite_bath(uneven, s.bath, s.ctx, 2), DimensionError);

  // Thermal reset on {0, delta}: probabilities 2/3, 1/3 have no exact dyadic rounding.
  const auto lattice = EnergySpectrum::from_energies(std::vector<double>{0.0, s.d});
  EXPECT_THROW(realize_finite_bath(thermal_reset_kernel(lattice, s.ctx), s.bath, s.ctx, 8), PreconditionError);
}
