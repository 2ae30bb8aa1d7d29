#include <gtest/gtest.h>

#include <cmath>

#include "fluctwork/errors.hpp"
#include "fluctwork/thermo_core.hpp"
#include "../common/oracles.hpp"

using namespace fluctwork;

TEST(ThermalContext, RejectsNonPositiveBeta) {
  EXPECT_THROW(ThermalContext(0.0), ContextError);
  EXPECT_THROW(ThermalContext(-1.0), ContextError);
  EXPECT_THROW(ThermalContext(std::nan("")), ContextError);
  EXPECT_DOUBLE_EQ(ThermalContext(4.0).temperature(), 0.25);
}

TEST(EnergySpectrum, LabelsAndLookup) {
  EnergySpectrum s({{"g", 0.0}, {"e", 2.5}});
  EXPECT_EQ(s.index_of("e"), 1u);
  EXPECT_THROW(s.index_of("x"), ArgumentError);
  EXPECT_THROW(EnergySpectrum({{"a", 0.0}, {"a", 1.0}}), ArgumentError);
  EXPECT_THROW(EnergySpectrum(std::vector<EnergyLevel>{}), ArgumentError);
  const auto f = EnergySpectrum::from_energies(std::vector<double>{1, 2, 3});
  EXPECT_EQ(f.label(2), "2");
}

TEST(DiagState, Normalization) {
  EXPECT_THROW(DiagState({0.5, 0.4}), ArgumentError);
  EXPECT_THROW(DiagState({1.2, -0.2}), ArgumentError);
  DiagState r({2.0, 6.0}, true);
  EXPECT_DOUBLE_EQ(r[1], 0.75);
  EXPECT_FALSE(DiagState::pure(3, 1).full_support());
  EXPECT_TRUE(DiagState::uniform(3).full_support());
}

TEST(ThermoCore, MatchesClosedForms) {
  const std::vector<double> e{0.0, 0.3, 1.7};
  const std::vector<double> p{0.2, 0.5, 0.3};
  const ThermalContext ctx(1.9);
  const auto spec = EnergySpectrum::from_energies(e);
  const DiagState state(p);
  EXPECT_NEAR(partition_function(spec, ctx), oracle::z(e, 1.9), 1e-15);
  EXPECT_NEAR(free_energy(spec, ctx, state), oracle::free_energy(e, p, 1.9), 1e-15);
  const auto summary = thermo_summary(spec, ctx, state);
  EXPECT_NEAR(summary.free_energy, summary.mean_energy - summary.entropy / 1.9, 1e-15);
}

TEST(ThermoCore, GibbsStateHasMinimalFreeEnergy) {
  const ThermalContext ctx(0.7);
  const auto spec = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0, 1.5});
  const DiagState g = gibbs_state(spec, ctx);
  EXPECT_NEAR(free_energy(spec, ctx, g), -std::log(partition_function(spec, ctx)) / 0.7, 1e-14);
  EXPECT_GT(free_energy(spec, ctx, DiagState({0.4, 0.3, 0.3})), free_energy(spec, ctx, g));
  EXPECT_TRUE(is_thermal(g, spec, ctx, 1e-12));
  EXPECT_FALSE(is_thermal(DiagState::uniform(3), spec, ctx, 1e-12));
}

TEST(ThermoCore, FineGrainedFreeEnergyAveragesToF) {
  const ThermalContext ctx(2.0);
  const auto spec = EnergySpectrum::from_energies(std::vector<double>{0.1, 0.9});
  const DiagState state({0.35, 0.65});
  const auto f = fine_grained_free_energy(state, spec, ctx);
  EXPECT_NEAR(f.values[0], 0.1 + std::log(0.35) / 2.0, 1e-15);
  EXPECT_NEAR(f.mean, free_energy(spec, ctx, state), 1e-15);
}

TEST(ThermoCore, FineGrainedFreeEnergyOfEmptyLevelIsMinusInfinity) {
  const ThermalContext ctx(1.0);
  const auto spec = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const auto f = fine_grained_free_energy(DiagState::pure(2, 0), spec, ctx);
  EXPECT_TRUE(std::isinf(f.values[1]) && f.values[1] < 0);
  EXPECT_NEAR(f.mean, 0.0, 1e-15);
}

TEST(ThermoCore, DimensionMismatch) {
  const auto spec = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  EXPECT_THROW(free_energy(spec, ThermalContext(1.0), DiagState::uniform(3)), DimensionError);
}
