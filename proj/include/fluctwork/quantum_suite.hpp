#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fluctwork/parallel.hpp"
#include "fluctwork/quantum_ops.hpp"
#include "fluctwork/thermo_core.hpp"

namespace fluctwork {

// A seeded system (x) bath (x) weight setup with commensurate energies.
// System has two levels; bath energies are distinct multiples of the ladder spacing.
struct QuantumInstance {
  std::uint64_t seed = 0;
  ThermalContext ctx;
  QuantumSpectra spectra;
  WeightLadder ladder;
  CMatrix v;  // on system (x) bath
  EnergyConservingUnitary u;
};

// permutation = true draws V as a phased permutation, which keeps diagonal inputs diagonal.
QuantumInstance make_quantum_instance(std::uint64_t seed, std::size_t bath_dim, std::size_t ladder_dim,
                                      bool permutation = false);

// Every quantity is an error against its exact target.
struct QuantumRecord {
  std::uint64_t seed = 0;
  std::size_t bath_dim = 0;
  std::size_t ladder_dim = 0;
  std::size_t guard_band = 0;
  double unitarity = 0.0;
  double covariance = 0.0;
  double energy_bookkeeping = 0.0;
  double gibbs_stochastic = 0.0;     // coherent weight state inside the guard band
  double second_law = 0.0;           // general system state
  double jarzynski = 0.0;
  double cq_second_law = 0.0;        // diagonal system state, sharp weight position
  double cq_jarzynski = 0.0;
  double crooks = 0.0;               // max superoperator distance over matrix units
  std::size_t crooks_inputs = 0;
  double tpm_row = 0.0;
  double tpm_column = 0.0;
  double tpm_jarzynski = 0.0;
  double unitality = 0.0;
  double purity = 0.0;               // |1 - tr rho^2| with a maximally coherent weight
};

QuantumRecord evaluate_quantum_instance(const QuantumInstance& instance, Exec exec = Exec::parallel);

// Classical shadow of a permutation-type instance.
struct IntegrationRecord {
  std::uint64_t seed = 0;
  double induced_gibbs_deviation = 0.0;
  double induced_row_deviation = 0.0;
  double value_mismatch = 0.0;  // classical identities vs quantum-layer values
};

IntegrationRecord evaluate_integration(std::uint64_t seed, std::size_t bath_dim, std::size_t ladder_dim);

// Names of the fields that miss their acceptance tolerance; empty when all hold.
std::vector<std::string> quantum_violations(const QuantumRecord& r);
std::vector<std::string> integration_violations(const IntegrationRecord& r);

}  // namespace fluctwork
