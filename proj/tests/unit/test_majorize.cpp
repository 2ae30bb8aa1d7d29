#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fluctwork/majorize.hpp"
#include "fluctwork/random.hpp"

using namespace fluctwork;

namespace {

// Classical majorization p > q via sorted partial sums.
bool majorizes(std::vector<double> p, std::vector<double> q) {
  std::sort(p.rbegin(), p.rend());
  std::sort(q.rbegin(), q.rend());
  double a = 0, b = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    a += p[i];
    b += q[i];
    if (a < b - 1e-9) return false;
  }
  return true;
}

std::vector<double> random_probs(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  for (double& x : p) x = rng.uniform(0.01, 1.0);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
  return p;
}

}  // namespace

TEST(Curve, VerticesFollowTheDefinition) {
  const ThermalContext ctx(1.0);
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const ThermoCurve c = build_curve(DiagState({0.5, 0.5}), h, ctx);
  ASSERT_EQ(c.vertices.size(), 3u);
  // 0.5 e^{1} > 0.5: the excited level comes first.
  EXPECT_NEAR(c.vertices[1].x, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(c.vertices[1].y, 0.5, 1e-15);
  EXPECT_NEAR(c.terminal_x(), 1.0 + std::exp(-1.0), 1e-15);
  EXPECT_EQ(c.vertices.back().y, 1.0);
  EXPECT_NEAR(c(std::exp(-1.0) / 2), 0.25, 1e-15);
  EXPECT_EQ(c(100.0), 1.0);
  EXPECT_TRUE(is_concave(c));
}

TEST(Curve, GibbsStateIsAStraightLine) {
  const ThermalContext ctx(0.8);
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 0.5, 2.0});
  const ThermoCurve c = build_curve(gibbs_state(h, ctx), h, ctx);
  const double z = partition_function(h, ctx);
  for (const auto& v : c.vertices) EXPECT_NEAR(v.y, v.x / z, 1e-14);
}

TEST(Curve, TrivialHamiltonianReducesToMajorization) {
  Rng rng(7);
  const ThermalContext ctx(1.0);
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 0.0, 0.0});
  int agree = 0;
  for (int t = 0; t < 300; ++t) {
    const auto p = random_probs(rng, 3);
    const auto q = random_probs(rng, 3);
    const bool curve = curve_dominates(build_curve(DiagState(p, true), h, ctx), build_curve(DiagState(q, true), h, ctx));
    EXPECT_EQ(curve, majorizes(p, q));
    agree += curve == majorizes(p, q);
  }
  EXPECT_EQ(agree, 300);
}

TEST(Shift, CrossingCurvesAreInfeasibleWithoutWork) {
  const ThermalContext ctx(1.0);
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const DiagState rho({0.5, 0.5}), sigma({0.9, 0.1});
  const WorkShiftForm none{{0, 0}, {0, 0}};
  const auto f = analyze_shift(rho, h, sigma, h, none, ctx);
  EXPECT_TRUE(f.partition_functions_match);
  EXPECT_FALSE(f.dominates);
  EXPECT_FALSE(curve_dominates(f.final_curve, f.initial_curve));  // they cross
}

TEST(Shift, StraighteningShiftsMakeTheTransitionReversible) {
  const ThermalContext ctx(1.0);
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const DiagState rho({0.5, 0.5}), sigma({0.9, 0.1});
  WorkShiftForm shift;
  for (std::size_t s = 0; s < 2; ++s) {
    shift.gamma.push_back(-h.energy(s) - std::log(rho[s]));
    shift.alpha.push_back(-h.energy(s) - std::log(sigma[s]));
  }
  const auto f = analyze_shift(rho, h, sigma, h, shift, ctx);
  EXPECT_TRUE(f.feasible);
  EXPECT_TRUE(feasible_with_shift(sigma, h, rho, h, WorkShiftForm{shift.alpha, shift.gamma}, ctx));
  const auto spec = shifted_spectrum(h, shift.gamma);
  EXPECT_NEAR(spec.energy(1), -std::log(0.5), 1e-15);
}

TEST(Shift, MismatchedPartitionFunctionsAreInfeasible) {
  const ThermalContext ctx(1.0);
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const DiagState rho({0.5, 0.5});
  const auto f = analyze_shift(rho, h, rho, h, WorkShiftForm{{0, 0}, {0.3, 0.3}}, ctx);
  EXPECT_FALSE(f.partition_functions_match);
  EXPECT_FALSE(f.feasible);
}
