#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fluctwork/hermitian.hpp"
#include "fluctwork/random.hpp"
#include "fluctwork/thermo_core.hpp"

namespace fluctwork {

// L-level weight with positions n * delta, n in [0, L).
class WeightLadder {
 public:
  WeightLadder(std::size_t dim, double delta);

  std::size_t dim() const noexcept { return dim_; }
  double delta() const noexcept { return delta_; }
  // |n> -> |n + m mod L>
  CMatrix shift(std::int64_t m) const;
  std::vector<double> energies() const;
  CMatrix position_state(std::size_t n) const;
  // Fourier state sum_n e^{2 pi i k n / L} |n> / sqrt(L): an eigenvector of every shift.
  CMatrix momentum_state(std::size_t k) const;
  CMatrix maximally_mixed() const;

 private:
  std::size_t dim_;
  double delta_;
};

// Diagonal Hamiltonians in the computational basis: system before and after,
// and the bath. Tensor order is S (x) B (x) W.
struct QuantumSpectra {
  EnergySpectrum system_initial;
  EnergySpectrum system_final;
  std::vector<double> bath;

  std::size_t ds() const { return system_initial.size(); }
  std::size_t db() const { return bath.size(); }
};

struct EnergyConservingUnitary {
  CMatrix u;
  std::size_t ds = 0;
  std::size_t db = 0;
  std::size_t dw = 0;
  // Weight steps for the block c -> c', indexed [c' * (ds db) + c].
  std::vector<std::int64_t> steps;
  std::int64_t max_step = 0;  // max |step| over blocks where V is nonzero
};

// U = sum_{c', c} |c'><c'| V |c><c| (x) shift((E_c - E'_c') / delta): the weight
// absorbs exactly the energy the system and bath give up.
EnergyConservingUnitary build_energy_conserving_unitary(const CMatrix& v, const QuantumSpectra& spectra,
                                                        const WeightLadder& ladder);

// Positions [max_step, L - max_step): inputs here never wrap around.
struct GuardBand {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool contains(std::size_t n) const { return n >= begin && n < end; }
  std::size_t size() const { return end > begin ? end - begin : 0; }
};

GuardBand guard_band(const EnergyConservingUnitary& u);

double unitarity_error(const CMatrix& u);
// ||[U, 1_SB (x) shift(1)]||_max
double translation_covariance_error(const EnergyConservingUnitary& u, const WeightLadder& ladder);
// Max energy mismatch over nonzero U elements whose input weight position is in the band.
double energy_bookkeeping_error(const EnergyConservingUnitary& u, const QuantumSpectra& spectra,
                                const WeightLadder& ladder);

struct QuantumChannel {
  std::vector<CMatrix> kraus;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;

  CMatrix apply(const CMatrix& rho) const;
  // Heisenberg picture: sum K^dagger X K.
  CMatrix apply_dual(const CMatrix& x) const;
  // Image of the matrix unit |i><j|.
  CMatrix apply_unit(std::size_t i, std::size_t j) const;
  CMatrix apply_dual_unit(std::size_t i, std::size_t j) const;
  // ||sum K^dagger K - 1||_max
  double trace_preservation_error() const;
};

QuantumChannel unitary_channel(const CMatrix& v);

// Forward Gamma_SW (U) and backward Theta_SW (U^dagger), both with the bath in
// its Gibbs state; Kraus operators sqrt(g_b) <b'|U|b>.
struct ChannelPair {
  QuantumChannel forward;
  QuantumChannel backward;
};

ChannelPair channels_from_unitary(const EnergyConservingUnitary& u, const QuantumSpectra& spectra,
                                  const ThermalContext& ctx);

// tr_B[g_B U (X (x) 1_B) U^dagger], the integral form of the backward dual.
CMatrix backward_dual_integral(const EnergyConservingUnitary& u, const QuantumSpectra& spectra,
                               const ThermalContext& ctx, const CMatrix& x);

// Gamma_SB(X) = tr_W[U (X (x) rho_W) U^dagger].
QuantumChannel system_bath_channel(const EnergyConservingUnitary& u, const CMatrix& rho_w);

CMatrix kron(const CMatrix& a, const CMatrix& b);
// For X on S (x) W with dims (ds, dw).
CMatrix trace_out_weight(const CMatrix& x, std::size_t ds, std::size_t dw);
CMatrix trace_out_system(const CMatrix& x, std::size_t ds, std::size_t dw);

// Block-diagonal part of rho in the eigenspaces of diag(energies); energies
// within tol count as one eigenspace.
CMatrix pinching(const CMatrix& rho, const std::vector<double>& energies, double tol = 1e-10);
double commutator_with_diagonal(const CMatrix& rho, const std::vector<double>& energies);

double purity(const CMatrix& rho);
CMatrix gibbs_matrix(const std::vector<double>& energies, const ThermalContext& ctx);

// J_H(X) = e^{beta H / 2} X e^{beta H / 2}, or its inverse.
class GibbsSuperoperator {
 public:
  GibbsSuperoperator(const CMatrix& h, const ThermalContext& ctx, bool inverse);
  static GibbsSuperoperator from_half(CMatrix half);

  CMatrix apply(const CMatrix& x) const { return half_ * x * half_; }
  const CMatrix& half() const noexcept { return half_; }

 private:
  explicit GibbsSuperoperator(CMatrix half) : half_(std::move(half)) {}
  CMatrix half_;
};

// Haar-distributed unitary (QR of a complex Gaussian matrix, phases fixed).
CMatrix random_unitary(std::size_t n, Rng& rng);
// Random full-rank density matrix (Wishart-like with a diagonal floor).
CMatrix random_density(std::size_t n, Rng& rng);
// Random pure state whose support is limited to the listed basis indices.
CMatrix random_pure_state(std::size_t n, const std::vector<std::size_t>& support, Rng& rng);
// Permutation of the basis with random phases: |c> -> e^{i phi_c} |perm[c]>.
CMatrix phased_permutation(const std::vector<std::size_t>& perm, Rng& rng);

}  // namespace fluctwork
