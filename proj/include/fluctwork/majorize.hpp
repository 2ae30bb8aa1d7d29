#pragma once

#include <cstddef>
#include <vector>

#include "fluctwork/thermo_core.hpp"

namespace fluctwork {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

// Piecewise-linear concave curve through the cumulative (Boltzmann weight,
// probability) pairs after sorting levels by p e^{beta E}, largest first.
struct ThermoCurve {
  std::vector<CurvePoint> vertices;  // starts at (0, 0), ends at (Z, 1)
  std::vector<std::size_t> order;    // level index behind each segment

  // Linear interpolation; y = 1 beyond the last vertex.
  double operator()(double x) const;
  double terminal_x() const { return vertices.back().x; }
};

ThermoCurve build_curve(const DiagState& state, const EnergySpectrum& spectrum, const ThermalContext& ctx);

// Slopes nonincreasing, x strictly increasing, y nondecreasing, within tol.
bool is_concave(const ThermoCurve& curve, double tol = 1e-12);

// a(x) >= b(x) - tol on the union of both vertex grids.
bool curve_dominates(const ThermoCurve& a, const ThermoCurve& b, double tol = 1e-9);

// Work w_{ss'} = alpha_s' - gamma_s.
struct WorkShiftForm {
  std::vector<double> gamma;  // indexed by initial level
  std::vector<double> alpha;  // indexed by final level
};

// Shifted spectra E + gamma and E' + alpha.
EnergySpectrum shifted_spectrum(const EnergySpectrum& spectrum, const std::vector<double>& shift);

struct ShiftFeasibility {
  bool feasible = false;
  bool partition_functions_match = false;  // relative 1e-9
  bool dominates = false;
  ThermoCurve initial_curve;
  ThermoCurve final_curve;
};

// A shift-form kernel exists iff the shifted partition functions agree (the
// Gibbs-stochastic sums add up to Z(E + gamma) = Z(E' + alpha)) and the
// initial shifted curve dominates the final one.
ShiftFeasibility analyze_shift(const DiagState& initial_state, const EnergySpectrum& initial,
                               const DiagState& final_state, const EnergySpectrum& final, const WorkShiftForm& shift,
                               const ThermalContext& ctx, double tol = 1e-9);

bool feasible_with_shift(const DiagState& initial_state, const EnergySpectrum& initial, const DiagState& final_state,
                         const EnergySpectrum& final, const WorkShiftForm& shift, const ThermalContext& ctx,
                         double tol = 1e-9);

}  // namespace fluctwork
