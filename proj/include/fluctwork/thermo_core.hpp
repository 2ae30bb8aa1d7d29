#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fluctwork {

// Inverse temperature in units with k_B = 1.
class ThermalContext {
 public:
  explicit ThermalContext(double beta);

  double beta() const noexcept { return beta_; }
  double temperature() const noexcept { return 1.0 / beta_; }

 private:
  double beta_;
};

struct EnergyLevel {
  std::string label;
  double energy = 0.0;

  friend bool operator==(const EnergyLevel&, const EnergyLevel&) = default;
};

// Ordered, labelled energy levels. Labels are unique; energies finite.
class EnergySpectrum {
 public:
  explicit EnergySpectrum(std::vector<EnergyLevel> levels);

  // Levels labelled "0", "1", ... in order.
  static EnergySpectrum from_energies(std::span<const double> energies);

  std::size_t size() const noexcept { return levels_.size(); }
  const std::vector<EnergyLevel>& levels() const noexcept { return levels_; }
  const std::vector<double>& energies() const noexcept { return energies_; }
  double energy(std::size_t i) const { return energies_.at(i); }
  const std::string& label(std::size_t i) const { return levels_.at(i).label; }
  // Index of the level with this label; throws ArgumentError if absent.
  std::size_t index_of(const std::string& label) const;

  friend bool operator==(const EnergySpectrum& a, const EnergySpectrum& b) {
    return a.levels_ == b.levels_;
  }

 private:
  std::vector<EnergyLevel> levels_;
  std::vector<double> energies_;
};

// Tolerance on the sum of an input probability vector.
inline constexpr double kNormalizationTolerance = 1e-12;

// Diagonal (quasi-classical) state: a probability vector over energy levels.
class DiagState {
 public:
  // Rejects negative entries and sums off 1 by more than kNormalizationTolerance,
  // unless `renormalize` is set, in which case a positive total is rescaled to 1.
  explicit DiagState(std::vector<double> probs, bool renormalize = false);

  static DiagState uniform(std::size_t n);
  static DiagState pure(std::size_t n, std::size_t index);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  bool full_support() const noexcept;

  friend bool operator==(const DiagState&, const DiagState&) = default;

 private:
  std::vector<double> probs_;
};

struct ThermoSummary {
  double partition_function = 0.0;  // Z
  double entropy = 0.0;             // Shannon entropy in nats
  double mean_energy = 0.0;
  double free_energy = 0.0;  // <H> - T S
  DiagState gibbs;
};

// f_s = E_s + T ln P(s); -infinity where P(s) = 0.
struct FineGrainedFreeEnergy {
  std::vector<double> values;
  double mean = 0.0;
};

double partition_function(const EnergySpectrum& spectrum, const ThermalContext& ctx);
DiagState gibbs_state(const EnergySpectrum& spectrum, const ThermalContext& ctx);
// Shannon entropy with 0 ln 0 := 0.
double shannon_entropy(const DiagState& state);
double free_energy(const EnergySpectrum& spectrum, const ThermalContext& ctx, const DiagState& state);

ThermoSummary thermo_summary(const EnergySpectrum& spectrum, const ThermalContext& ctx,
                             const DiagState& state);

FineGrainedFreeEnergy fine_grained_free_energy(const DiagState& state, const EnergySpectrum& spectrum,
                                               const ThermalContext& ctx);

// True when `state` equals the Gibbs state of `spectrum` entrywise within tol.
bool is_thermal(const DiagState& state, const EnergySpectrum& spectrum, const ThermalContext& ctx,
                double tol);

void require_aligned(const DiagState& state, const EnergySpectrum& spectrum, const char* what);

}  // namespace fluctwork
