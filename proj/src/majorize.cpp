#include "fluctwork/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fluctwork/errors.hpp"

namespace fluctwork {

double ThermoCurve::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= vertices.back().x) return 1.0;
  auto it = std::upper_bound(vertices.begin(), vertices.end(), x,
                             [](double v, const CurvePoint& p) { return v < p.x; });
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

ThermoCurve build_curve(const DiagState& state, const EnergySpectrum& spectrum, const ThermalContext& ctx) {
  require_aligned(state, spectrum, "thermo-majorization curve");
  const std::size_t d = spectrum.size();
  std::vector<double> key(d);
  for (std::size_t s = 0; s < d; ++s) key[s] = state[s] * std::exp(ctx.beta() * spectrum.energy(s));
  ThermoCurve curve;
  curve.order.resize(d);
  std::iota(curve.order.begin(), curve.order.end(), 0);
  std::stable_sort(curve.order.begin(), curve.order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  curve.vertices.push_back({0.0, 0.0});
  double x = 0.0;
  double y = 0.0;
  for (std::size_t s : curve.order) {
    x += std::exp(-ctx.beta() * spectrum.energy(s));
    y += state[s];
    curve.vertices.push_back({x, y});
  }
  curve.vertices.back().y = 1.0;  // absorb rounding in the cumulative sum
  return curve;
}

bool is_concave(const ThermoCurve& curve, double tol) {
  const auto& v = curve.vertices;
  if (v.size() < 2 || v.front().x != 0.0 || v.front().y != 0.0) return false;
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double dx = v[i].x - v[i - 1].x;
    const double dy = v[i].y - v[i - 1].y;
    if (dx <= 0.0 || dy < -tol) return false;
    const double slope = dy / dx;
    if (slope > prev_slope + tol * std::max(1.0, std::abs(prev_slope))) return false;
    prev_slope = slope;
  }
  return std::abs(v.back().y - 1.0) <= tol;
}

bool curve_dominates(const ThermoCurve& a, const ThermoCurve& b, double tol) {
  for (const auto* c : {&a, &b}) {
    for (const auto& p : c->vertices) {
      if (a(p.x) < b(p.x) - tol) return false;
    }
  }
  return true;
}

EnergySpectrum shifted_spectrum(const EnergySpectrum& spectrum, const std::vector<double>& shift) {
  if (shift.size() != spectrum.size()) throw DimensionError("shift length does not match the spectrum");
  std::vector<EnergyLevel> levels = spectrum.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) levels[i].energy += shift[i];
  return EnergySpectrum(std::move(levels));
}

ShiftFeasibility analyze_shift(const DiagState& initial_state, const EnergySpectrum& initial,
                               const DiagState& final_state, const EnergySpectrum& final, const WorkShiftForm& shift,
                               const ThermalContext& ctx, double tol) {
  const EnergySpectrum a = shifted_spectrum(initial, shift.gamma);
  const EnergySpectrum b = shifted_spectrum(final, shift.alpha);
  ShiftFeasibility out;
  out.initial_curve = build_curve(initial_state, a, ctx);
  out.final_curve = build_curve(final_state, b, ctx);
  const double za = out.initial_curve.terminal_x();
  const double zb = out.final_curve.terminal_x();
  out.partition_functions_match = std::abs(za - zb) <= 1e-9 * std::max(za, zb);
  out.dominates = curve_dominates(out.initial_curve, out.final_curve, tol);
  out.feasible = out.partition_functions_match && out.dominates;
  return out;
}

bool feasible_with_shift(const DiagState& initial_state, const EnergySpectrum& initial, const DiagState& final_state,
                         const EnergySpectrum& final, const WorkShiftForm& shift, const ThermalContext& ctx,
                         double tol) {
  return analyze_shift(initial_state, initial, final_state, final, shift, ctx, tol).feasible;
}

}  // namespace fluctwork
