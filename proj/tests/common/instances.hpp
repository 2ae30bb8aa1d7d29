#pragma once
// Seeded problem generators shared by the unit tests and the acceptance run.

#include <cmath>
#include <cstdint>

#include "fluctwork/feasibility.hpp"
#include "fluctwork/majorize.hpp"
#include "fluctwork/random.hpp"

namespace testgen {

struct ShiftInstance {
  fluctwork::ThermalContext ctx;
  fluctwork::EnergySpectrum initial;
  fluctwork::EnergySpectrum final;
  fluctwork::DiagState rho;
  fluctwork::DiagState sigma;
  fluctwork::WorkShiftForm shift;
};

// Two-level instance with work of the form alpha_s' - gamma_s. Most draws have matched shifted
// partition functions (the only case where a kernel can exist); some have sigma pushed through a
// random shifted-Gibbs-preserving map so feasible cases are well represented.
inline ShiftInstance shift_instance(std::uint64_t seed) {
  using namespace fluctwork;
  Rng rng(Rng::stream_seed(seed, 77));
  const ThermalContext ctx(rng.uniform(0.3, 3.0));
  const double beta = ctx.beta();
  const auto h = EnergySpectrum::from_energies(std::vector<double>{0.0, rng.uniform(0.0, 2.0)});
  const auto hp = EnergySpectrum::from_energies(std::vector<double>{0.0, rng.uniform(0.0, 2.0)});
  WorkShiftForm shift{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
  double zg = 0, za = 0;
  for (std::size_t s = 0; s < 2; ++s) zg += std::exp(-beta * (h.energy(s) + shift.gamma[s]));
  for (std::size_t s = 0; s < 2; ++s) za += std::exp(-beta * (hp.energy(s) + shift.alpha[s]));
  const double mode = rng.uniform();
  if (mode < 0.85) {
    const double c = -std::log(zg / za) / beta;
    for (double& a : shift.alpha) a += c;
  }
  const double p = rng.uniform(0.02, 0.98);
  DiagState rho({p, 1.0 - p});
  DiagState sigma({0.5, 0.5});
  if (mode < 0.45) {
    // sigma = P rho with P preserving the shifted Gibbs weights: feasible by construction.
    std::vector<double> g(2), gp(2);
    double z = 0, zp = 0;
    for (std::size_t s = 0; s < 2; ++s) z += g[s] = std::exp(-beta * (h.energy(s) + shift.gamma[s]));
    for (std::size_t s = 0; s < 2; ++s) zp += gp[s] = std::exp(-beta * (hp.energy(s) + shift.alpha[s]));
    for (auto& x : g) x /= z;
    for (auto& x : gp) x /= zp;
    // P(0|0) = a, P(0|1) = b with a g0 + b g1 = gp0; a in a range keeping b in [0, 1].
    const double lo = std::max(0.0, (gp[0] - g[1]) / g[0]);
    const double hi = std::min(1.0, gp[0] / g[0]);
    const double a = rng.uniform(lo, hi);
    const double b = (gp[0] - a * g[0]) / g[1];
    const double s0 = a * p + b * (1.0 - p);
    sigma = DiagState({s0, 1.0 - s0}, true);
  } else {
    const double q = rng.uniform(0.02, 0.98);
    sigma = DiagState({q, 1.0 - q});
  }
  return ShiftInstance{ctx, h, hp, rho, sigma, shift};
}

inline fluctwork::FeasibilityProblem shift_problem(const ShiftInstance& in) {
  std::vector<double> grid;
  for (double a : in.shift.alpha)
    for (double g : in.shift.gamma) grid.push_back(a - g);
  return fluctwork::FeasibilityProblem{in.ctx,   in.initial,             in.rho,  in.final,
                                       in.sigma, fluctwork::WorkGrid(grid), std::nullopt, in.shift};
}

// Noisy erasure of a degenerate qubit on a uniform grid of spacing h over [-3, 14].
inline fluctwork::FeasibilityProblem erasure_problem(double epsilon, double h, double beta = 1.0) {
  using namespace fluctwork;
  const auto flat = EnergySpectrum::from_energies(std::vector<double>{0.0, 0.0});
  std::vector<double> grid;
  const auto n = static_cast<int>(std::lround(17.0 / h));
  for (int i = 0; i <= n; ++i) grid.push_back(-3.0 + i * h);
  return FeasibilityProblem{ThermalContext(beta), flat, DiagState({0.5, 0.5}), flat,
                            DiagState({1.0 - epsilon, epsilon}), WorkGrid(grid), std::nullopt, std::nullopt};
}

}  // namespace testgen
