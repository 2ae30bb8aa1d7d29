#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fluctwork/parallel.hpp"
#include "fluctwork/thermo_core.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

// Truncated bath with levels j * delta, j in [-M, M], and degeneracy
// Omega_j = 2^(M + j). The canonical choice e^(beta delta) = 2 makes the density
// of states exactly proportional to e^(beta E).
struct BathModel {
  double delta = 0.0;
  int half_range = 0;  // M

  std::uint64_t degeneracy(int j) const;
  // Bath spacing with e^(beta delta) = 2.
  static BathModel canonical(const ThermalContext& ctx, int half_range);
};

inline constexpr int kMaxBathHalfRange = 28;

// A system+bath microstate (s, j, k) with k < Omega_j.
struct Microstate {
  std::size_t level = 0;
  int bath_level = 0;
  std::uint64_t index = 0;

  friend auto operator<=>(const Microstate&, const Microstate&) = default;
};

// Contiguous block of microstates [k_begin, k_begin + count) at (s, j) mapped in
// order onto [k_target, k_target + count) at (s', j'). Boundary segments pair
// leftover microstates near the truncation edge and do not conserve energy.
struct BathSegment {
  std::size_t s = 0;
  int j = 0;
  std::uint64_t k_begin = 0;
  std::uint64_t count = 0;
  std::size_t s_prime = 0;
  int j_prime = 0;
  std::uint64_t k_target = 0;
  bool boundary = false;
};

// Explicit bijection on the truncated system+bath microstate space realizing a
// Gibbs-stochastic kernel whose entries are dyadic with denominator 2^D.
struct PermutationRealization {
  BathModel bath;
  int denom_bits = 0;
  // Integer levels E_s / delta, E'_s' / delta and w_k / delta.
  std::vector<std::int64_t> initial_levels;
  std::vector<std::int64_t> final_levels;
  std::vector<std::int64_t> work_levels;
  // Kernel entries times 2^D, indexed [(s * d' + s') * G + k].
  std::vector<std::uint64_t> numerators;
  std::vector<BathSegment> segments;  // sorted by (s, j, k_begin)
  std::uint64_t total_microstates = 0;
  std::uint64_t boundary_microstates = 0;
  double boundary_fraction = 0.0;
  WorkKernel dyadic;   // the rounded kernel that was realized
  WorkKernel induced;  // counted from the map on interior bath levels

  std::uint64_t numerator(std::size_t s, std::size_t s_prime, std::size_t k) const;
  Microstate apply(const Microstate& m) const;
};

// Builds the permutation. Requires beta * delta = ln 2, every energy and work
// value an integer multiple of delta, equal initial and final dimension, and a
// dyadic rounding of the kernel that satisfies the Gibbs-stochastic condition
// exactly in integer arithmetic.
PermutationRealization realize_finite_bath(const WorkKernel& kernel, const BathModel& bath,
                                           const ThermalContext& ctx, int denom_bits,
                                           Exec exec = Exec::parallel);

struct RealizationCheck {
  bool bijective = false;          // both source and target levels tiled exactly
  bool energy_conserved = false;   // every non-boundary segment conserves E_s + eps
  bool counting_identity = false;  // sum P * Omega(eps) = Omega(eps') on interior targets, in integers
  bool induced_matches_dyadic = false;
  double max_error_vs_input = 0.0;
  std::size_t interior_targets = 0;
  std::size_t interior_sources = 0;

  bool pass(int denom_bits) const {
    return bijective && energy_conserved && counting_identity && induced_matches_dyadic &&
           max_error_vs_input <= std::ldexp(1.0, -denom_bits);
  }
};

RealizationCheck verify_realization(const PermutationRealization& r, const WorkKernel& input,
                                    Exec exec = Exec::parallel);

// Random kernel with entries n / 2^D that is exactly Gibbs-stochastic in
// integer arithmetic. Same lattice requirements as realize_finite_bath; the
// grid must contain every E_s - E'_s' difference.
WorkKernel random_dyadic_kernel(const EnergySpectrum& initial, const EnergySpectrum& final, const WorkGrid& grid,
                                const ThermalContext& ctx, int denom_bits, std::uint64_t seed);

}  // namespace fluctwork
