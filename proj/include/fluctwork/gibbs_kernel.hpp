#pragma once

#include <cstdint>
#include <vector>

#include "fluctwork/thermo_core.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

struct GibbsValidation {
  // sum_{s,w} P(s',w|s) exp(beta (E_s' - E_s + w)) for every final level s'.
  std::vector<double> gibbs_sums;
  // sum_{s',w} P(s',w|s) for every initial level s.
  std::vector<double> row_sums;
  double max_gibbs_deviation = 0.0;
  double max_row_deviation = 0.0;
  bool pass = false;
};

// Checks the Gibbs-stochastic condition and row normalization. Violations are
// reported, never thrown.
GibbsValidation validate_gibbs_stochastic(const WorkKernel& kernel, const ThermalContext& ctx, double tol);

// P_back(s, -w | s') = P(s', w | s) exp(beta (E_s' - E_s + w)), with the
// spectra swapped and the grid negated. Warns (and still computes) when the
// input is not Gibbs-stochastic to 1e-9.
WorkKernel backward_kernel(const WorkKernel& kernel, const ThermalContext& ctx);

struct Marginals {
  DiagState final_state;
  std::vector<double> work_distribution;  // aligned with the kernel grid
  double mean_work = 0.0;
};

Marginals marginals(const DiagState& state, const WorkKernel& kernel);

// Strictly positive kernel satisfying row normalization and the
// Gibbs-stochastic condition to 1e-13. Deterministic in `seed`.
WorkKernel random_kernel(const EnergySpectrum& initial, const EnergySpectrum& final, const WorkGrid& grid,
                         const ThermalContext& ctx, std::uint64_t seed);

inline constexpr double kRandomKernelTolerance = 1e-13;
inline constexpr int kRandomKernelMaxSweeps = 100000;

// delta_{ss'} with w = 0; requires nothing of the spectrum.
WorkKernel identity_kernel(const EnergySpectrum& spectrum);
// P(s', 0 | s) = exp(-beta E_s') / Z.
WorkKernel thermal_reset_kernel(const EnergySpectrum& spectrum, const ThermalContext& ctx);
// P(s', w | s) = delta_{ss'} delta_{w, E_s - E'_s}; spectra must have equal size.
WorkKernel level_transformation_kernel(const EnergySpectrum& initial, const EnergySpectrum& final);

}  // namespace fluctwork
