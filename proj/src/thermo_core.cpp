#include "fluctwork/thermo_core.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "fluctwork/errors.hpp"

namespace fluctwork {

ThermalContext::ThermalContext(double beta) : beta_(beta) {
  if (!std::isfinite(beta) || beta <= 0.0) {
    throw ContextError("beta must be positive and finite, got " + std::to_string(beta));
  }
}

EnergySpectrum::EnergySpectrum(std::vector<EnergyLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw ArgumentError("energy spectrum must be nonempty");
  std::set<std::string> seen;
  energies_.reserve(levels_.size());
  for (const auto& level : levels_) {
    if (!seen.insert(level.label).second) {
      throw ArgumentError("duplicate level label '" + level.label + "'");
    }
    if (!std::isfinite(level.energy)) {
      throw ArgumentError("energy of level '" + level.label + "' is not finite");
    }
    energies_.push_back(level.energy);
  }
}

EnergySpectrum EnergySpectrum::from_energies(std::span<const double> energies) {
  std::vector<EnergyLevel> levels;
  levels.reserve(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    levels.push_back({std::to_string(i), energies[i]});
  }
  return EnergySpectrum(std::move(levels));
}

std::size_t EnergySpectrum::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].label == label) return i;
  }
  throw ArgumentError("unknown level label '" + label + "'");
}

DiagState::DiagState(std::vector<double> probs, bool renormalize) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ArgumentError("state must be nonempty");
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw ArgumentError("state probabilities must be finite and >= 0");
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (renormalize) {
    if (total <= 0.0) throw ArgumentError("cannot renormalize a state with zero total weight");
    for (double& p : probs_) p /= total;
  } else if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw ArgumentError("state probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

DiagState DiagState::uniform(std::size_t n) {
  if (n == 0) throw ArgumentError("state must be nonempty");
  return DiagState(std::vector<double>(n, 1.0 / static_cast<double>(n)), true);
}

DiagState DiagState::pure(std::size_t n, std::size_t index) {
  if (index >= n) throw ArgumentError("pure-state index out of range");
  std::vector<double> p(n, 0.0);
  p[index] = 1.0;
  return DiagState(std::move(p));
}

bool DiagState::full_support() const noexcept {
  for (double p : probs_) {
    if (p <= 0.0) return false;
  }
  return true;
}

void require_aligned(const DiagState& state, const EnergySpectrum& spectrum, const char* what) {
  if (state.size() != spectrum.size()) {
    throw DimensionError(std::string(what) + ": state has " + std::to_string(state.size()) +
                         " entries but spectrum has " + std::to_string(spectrum.size()) + " levels");
  }
}

double partition_function(const EnergySpectrum& spectrum, const ThermalContext& ctx) {
  double z = 0.0;
  for (double e : spectrum.energies()) z += std::exp(-ctx.beta() * e);
  return z;
}

DiagState gibbs_state(const EnergySpectrum& spectrum, const ThermalContext& ctx) {
  std::vector<double> w;
  w.reserve(spectrum.size());
  for (double e : spectrum.energies()) w.push_back(std::exp(-ctx.beta() * e));
  return DiagState(std::move(w), true);
}

double shannon_entropy(const DiagState& state) {
  double s = 0.0;
  for (double p : state.probs()) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double free_energy(const EnergySpectrum& spectrum, const ThermalContext& ctx, const DiagState& state) {
  require_aligned(state, spectrum, "free_energy");
  double mean_energy = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) mean_energy += state[i] * spectrum.energy(i);
  return mean_energy - ctx.temperature() * shannon_entropy(state);
}

ThermoSummary thermo_summary(const EnergySpectrum& spectrum, const ThermalContext& ctx,
                             const DiagState& state) {
  require_aligned(state, spectrum, "thermo_summary");
  double mean_energy = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) mean_energy += state[i] * spectrum.energy(i);
  const double entropy = shannon_entropy(state);
  return ThermoSummary{
      .partition_function = partition_function(spectrum, ctx),
      .entropy = entropy,
      .mean_energy = mean_energy,
      .free_energy = mean_energy - ctx.temperature() * entropy,
      .gibbs = gibbs_state(spectrum, ctx),
  };
}

FineGrainedFreeEnergy fine_grained_free_energy(const DiagState& state, const EnergySpectrum& spectrum,
                                               const ThermalContext& ctx) {
  require_aligned(state, spectrum, "fine_grained_free_energy");
  FineGrainedFreeEnergy out;
  out.values.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] > 0.0) {
      out.values[i] = spectrum.energy(i) + ctx.temperature() * std::log(state[i]);
      out.mean += state[i] * out.values[i];
    } else {
      out.values[i] = -std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

bool is_thermal(const DiagState& state, const EnergySpectrum& spectrum, const ThermalContext& ctx,
                double tol) {
  require_aligned(state, spectrum, "is_thermal");
  const DiagState g = gibbs_state(spectrum, ctx);
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (std::abs(state[i] - g[i]) > tol) return false;
  }
  return true;
}

}  // namespace fluctwork
