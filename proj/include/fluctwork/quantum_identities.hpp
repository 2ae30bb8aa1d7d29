#pragma once

#include <cstddef>
#include <vector>

#include "fluctwork/fluctuation_lab.hpp"
#include "fluctwork/parallel.hpp"
#include "fluctwork/quantum_ops.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

// Mixing weight used to take the full-rank limit of rank-deficient states.
inline constexpr double kFullRankMixing = 1e-10;

// || tr_W[(J_{H'_S + H_W} o Gamma o J^{-1}_{H_S + H_W})(1_S (x) rho_W)] - 1_S ||_F
double quantum_gibbs_stochastic_deviation(const QuantumChannel& gamma, const QuantumSpectra& spectra,
                                          const WeightLadder& ladder, const CMatrix& rho_w,
                                          const ThermalContext& ctx);

struct QuantumIdentityResult {
  // quantum_second_law (-> 1), quantum_jarzynski (-> Z'), and when requested
  // classical_quantum_second_law (-> 1), classical_quantum_jarzynski (-> Z').
  std::vector<IdentityReport> reports;
  double eta_initial = 0.0;  // full-rank mixing applied to rho_S
  double eta_final = 0.0;    // ... and to the final system state
  CMatrix final_state;       // tr_W Gamma(rho_S (x) rho_W)
};

// The free-energy operators F = H + T ln Delta[rho] are used for the
// classical-quantum pair, which requires [rho_S, H_S] = 0 and [rho_W, H_W] = 0
// (PreconditionError otherwise).
QuantumIdentityResult quantum_identities(const CMatrix& rho_s, const CMatrix& rho_w, const QuantumChannel& gamma,
                                         const QuantumSpectra& spectra, const WeightLadder& ladder,
                                         const ThermalContext& ctx, bool classical_quantum = true,
                                         double tol = 1e-8);

struct CrooksDistance {
  double distance = 0.0;  // max over inputs of the Frobenius distance
  std::size_t inputs = 0;
};

// Compares J_{H'_S + H_W} o Gamma o J^{-1}_{H_S + H_W} with the dual of the
// backward channel on every matrix unit supported in the guard band.
CrooksDistance quantum_crooks_check(const EnergyConservingUnitary& u, const ChannelPair& channels,
                                    const QuantumSpectra& spectra, const WeightLadder& ladder,
                                    const ThermalContext& ctx, Exec exec = Exec::parallel);

// Theta*(X) from the Kraus adjoints against the integral form; max-abs difference.
double backward_dual_consistency(const EnergyConservingUnitary& u, const ChannelPair& channels,
                                 const QuantumSpectra& spectra, const ThermalContext& ctx, const CMatrix& x);

// P(s', w | s) = <s', x0 + k| Gamma(|s><s| (x) |x0><x0|) |s', x0 + k> with
// w = k delta. Throws NotQuasiClassicalError when an output has off-diagonal
// weight above tol.
WorkKernel induced_classical_kernel(const QuantumChannel& gamma, const QuantumSpectra& spectra,
                                    const WeightLadder& ladder, std::size_t x0, double tol = 1e-10);

// Two-point measurement statistics of a channel on system (x) bath.
struct TpmReport {
  std::vector<double> initial_levels;  // distinct eigenvalues of H_S + H_B
  std::vector<double> final_levels;    // ... of H'_S + H_B
  std::vector<std::size_t> initial_degeneracy;
  std::vector<std::size_t> final_degeneracy;
  Eigen::MatrixXd matrix;     // P(E' | E), rows E
  double row_error = 0.0;     // max |sum_E' P - 1|
  double column_error = 0.0;  // max |sum_E d_E P / d_E' - 1|
  double jarzynski = 0.0;     // <e^{beta (E - E')}> from thermal S and B
  double target = 0.0;        // Z'_S / Z_S
};

TpmReport tpm_check(const QuantumChannel& gamma_sb, const QuantumSpectra& spectra, const ThermalContext& ctx,
                    double level_tol = 1e-10);

}  // namespace fluctwork
