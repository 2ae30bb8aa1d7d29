#include "fluctwork/quantum_identities.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "fluctwork/errors.hpp"

namespace fluctwork {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Diagonal of H_S (x) 1 + 1 (x) H_W on system (x) weight.
std::vector<double> sw_energies(const EnergySpectrum& system, const WeightLadder& ladder) {
  std::vector<double> h;
  const auto w = ladder.energies();
  for (std::size_t s = 0; s < system.size(); ++s)
    for (double x : w) h.push_back(system.energy(s) + x);
  return h;
}

std::vector<double> weight_only(std::size_t ds, const WeightLadder& ladder) {
  std::vector<double> h;
  const auto w = ladder.energies();
  for (std::size_t s = 0; s < ds; ++s) h.insert(h.end(), w.begin(), w.end());
  return h;
}

// e^{sign beta h / 2} X e^{sign beta h / 2} for diagonal h.
CMatrix conj_diag(const CMatrix& x, const std::vector<double>& h, double sign, const ThermalContext& ctx) {
  Eigen::VectorXd d(ix(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) d(ix(i)) = std::exp(sign * 0.5 * ctx.beta() * h[i]);
  return d.asDiagonal() * x * d.asDiagonal();
}

CMatrix sandwich(const CMatrix& half, const CMatrix& x) { return half * x * half; }

// Mixes in eta * Gibbs when rho is rank deficient; returns the weight used.
double full_rank(CMatrix& rho, const EnergySpectrum& spectrum, const ThermalContext& ctx) {
  if (min_eigenvalue(rho) > 1e-12) return 0.0;
  const CMatrix g = gibbs_matrix(spectrum.energies(), ctx);
  rho = (1.0 - kFullRankMixing) * rho + kFullRankMixing * g;
  return kFullRankMixing;
}

CMatrix identity(std::size_t n) { return CMatrix::Identity(ix(n), ix(n)); }

}  // namespace

double quantum_gibbs_stochastic_deviation(const QuantumChannel& gamma, const QuantumSpectra& spectra,
                                          const WeightLadder& ladder, const CMatrix& rho_w,
                                          const ThermalContext& ctx) {
  const std::size_t ds = spectra.ds();
  const std::size_t dw = ladder.dim();
  if (gamma.in_dim != ds * dw) throw DimensionError("channel does not act on system (x) weight");
  const CMatrix in = conj_diag(kron(identity(ds), rho_w), sw_energies(spectra.system_initial, ladder), -1.0, ctx);
  const CMatrix out = conj_diag(gamma.apply(in), sw_energies(spectra.system_final, ladder), 1.0, ctx);
  return (trace_out_weight(out, ds, dw) - identity(ds)).norm();
}

QuantumIdentityResult quantum_identities(const CMatrix& rho_s_in, const CMatrix& rho_w, const QuantumChannel& gamma,
                                         const QuantumSpectra& spectra, const WeightLadder& ladder,
                                         const ThermalContext& ctx, bool classical_quantum, double tol) {
  const std::size_t ds = spectra.ds();
  const std::size_t dw = ladder.dim();
  if (gamma.in_dim != ds * dw) throw DimensionError("channel does not act on system (x) weight");
  if (static_cast<std::size_t>(rho_s_in.rows()) != ds || static_cast<std::size_t>(rho_w.rows()) != dw) {
    throw DimensionError("state dimensions do not match the spectra");
  }
  const auto hw = weight_only(ds, ladder);
  const auto hsw = sw_energies(spectra.system_initial, ladder);
  const auto hsw_final = sw_energies(spectra.system_final, ladder);
  const double zp = partition_function(spectra.system_final, ctx);

  QuantumIdentityResult out;
  CMatrix rho_s = rho_s_in;
  out.eta_initial = full_rank(rho_s, spectra.system_initial, ctx);
  const CMatrix joint = kron(rho_s, rho_w);
  out.final_state = trace_out_weight(gamma.apply(joint), ds, dw);
  CMatrix rho_final = out.final_state;
  out.eta_final = full_rank(rho_final, spectra.system_final, ctx);

  // Quantum pair: J^{-1}_{T ln rho_S} first, J_{T ln rho'_S} last.
  const CMatrix left = kron(hermitian_power(rho_s, -0.5), identity(dw));
  const CMatrix stripped = conj_diag(sandwich(left, joint), hsw, -1.0, ctx);
  const CMatrix evolved = gamma.apply(stripped);
  const CMatrix right = kron(hermitian_power(rho_final, 0.5), identity(dw));
  const double second_law = sandwich(right, conj_diag(evolved, hsw_final, 1.0, ctx)).trace().real();
  const double jarzynski = conj_diag(evolved, hw, 1.0, ctx).trace().real();
  out.reports.push_back(make_report("quantum_second_law", second_law, 1.0, tol));
  out.reports.push_back(make_report("quantum_jarzynski", jarzynski, zp, tol));

  if (classical_quantum) {
    if (commutator_with_diagonal(rho_s_in, spectra.system_initial.energies()) > 1e-10 ||
        commutator_with_diagonal(rho_w, ladder.energies()) > 1e-10) {
      throw PreconditionError("system and weight states must commute with their Hamiltonians");
    }
    // e^{-beta F/2} = e^{-beta H/2} Delta[rho]^{-1/2}; the two factors commute.
    auto half = [&](const EnergySpectrum& spectrum, const CMatrix& rho, double sign) {
      Eigen::VectorXd boltz(ix(ds));
      for (std::size_t s = 0; s < ds; ++s) boltz(ix(s)) = std::exp(sign * 0.5 * ctx.beta() * spectrum.energy(s));
      const CMatrix system = boltz.asDiagonal() * hermitian_power(pinching(rho, spectrum.energies()), 0.5 * sign);
      Eigen::VectorXd weight(ix(dw));
      const auto we = ladder.energies();
      for (std::size_t n = 0; n < dw; ++n) weight(ix(n)) = std::exp(sign * 0.5 * ctx.beta() * we[n]);
      return kron(system, CMatrix(weight.asDiagonal()));
    };
    const CMatrix in_half = half(spectra.system_initial, rho_s, -1.0);
    const CMatrix out_half = half(spectra.system_final, rho_final, 1.0);
    const CMatrix cq_evolved = gamma.apply(sandwich(in_half, joint));
    const double cq_second_law = sandwich(out_half, cq_evolved).trace().real();
    const double cq_jarzynski = conj_diag(cq_evolved, hw, 1.0, ctx).trace().real();
    out.reports.push_back(make_report("classical_quantum_second_law", cq_second_law, 1.0, tol));
    out.reports.push_back(make_report("classical_quantum_jarzynski", cq_jarzynski, zp, tol));
  }
  return out;
}

CrooksDistance quantum_crooks_check(const EnergyConservingUnitary& u, const ChannelPair& channels,
                                    const QuantumSpectra& spectra, const WeightLadder& ladder,
                                    const ThermalContext& ctx, Exec exec) {
  const std::size_t ds = spectra.ds();
  const std::size_t dw = ladder.dim();
  const GuardBand band = guard_band(u);
  std::vector<std::size_t> basis;
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t n = band.begin; n < band.end; ++n) basis.push_back(s * dw + n);
  const auto h_in = sw_energies(spectra.system_initial, ladder);
  const auto h_out = sw_energies(spectra.system_final, ladder);
  Eigen::VectorXd up(ix(h_out.size()));
  for (std::size_t i = 0; i < h_out.size(); ++i) up(ix(i)) = std::exp(0.5 * ctx.beta() * h_out[i]);

  const auto units = static_cast<std::int64_t>(basis.size() * basis.size());
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst) if (exec == Exec::parallel)
  for (std::int64_t t = 0; t < units; ++t) {
    const std::size_t i = basis[static_cast<std::size_t>(t) / basis.size()];
    const std::size_t j = basis[static_cast<std::size_t>(t) % basis.size()];
    const double down = std::exp(-0.5 * ctx.beta() * (h_in[i] + h_in[j]));
    const CMatrix lhs = down * (up.asDiagonal() * channels.forward.apply_unit(i, j) * up.asDiagonal());
    const CMatrix rhs = channels.backward.apply_dual_unit(i, j);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return CrooksDistance{worst, basis.size() * basis.size()};
}

double backward_dual_consistency(const EnergyConservingUnitary& u, const ChannelPair& channels,
                                 const QuantumSpectra& spectra, const ThermalContext& ctx, const CMatrix& x) {
  const CMatrix a = channels.backward.apply_dual(x);
  const CMatrix b = backward_dual_integral(u, spectra, ctx, x);
  return (a - b).cwiseAbs().maxCoeff();
}

WorkKernel induced_classical_kernel(const QuantumChannel& gamma, const QuantumSpectra& spectra,
                                    const WeightLadder& ladder, std::size_t x0, double tol) {
  const std::size_t ds = spectra.ds();
  const std::size_t dw = ladder.dim();
  if (gamma.in_dim != ds * dw) throw DimensionError("channel does not act on system (x) weight");
  if (x0 >= dw) throw ArgumentError("reference position outside the ladder");
  // entries[(s, s', displacement)] = probability
  std::map<std::tuple<std::size_t, std::size_t, std::int64_t>, double> entries;
  for (std::size_t s = 0; s < ds; ++s) {
    const std::size_t i = s * dw + x0;
    const CMatrix out = gamma.apply_unit(i, i);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        if (r != c && std::abs(out(r, c)) > tol) {
          throw NotQuasiClassicalError("output for level " + spectra.system_initial.label(s) +
                                       " has coherence " + std::to_string(std::abs(out(r, c))));
        }
    for (std::size_t sp = 0; sp < ds; ++sp)
      for (std::size_t n = 0; n < dw; ++n) {
        const double p = out(ix(sp * dw + n), ix(sp * dw + n)).real();
        if (p > 0.0) {
          entries[{s, sp, static_cast<std::int64_t>(n) - static_cast<std::int64_t>(x0)}] += p;
        }
      }
  }
  std::vector<double> values;
  for (const auto& [key, p] : entries) values.push_back(static_cast<double>(std::get<2>(key)) * ladder.delta());
  WorkKernel kernel(spectra.system_initial, spectra.system_final, WorkGrid(values));
  for (const auto& [key, p] : entries) {
    const auto k = kernel.grid().find(static_cast<double>(std::get<2>(key)) * ladder.delta());
    kernel.add(std::get<0>(key), std::get<1>(key), *k, p);
  }
  return kernel;
}

TpmReport tpm_check(const QuantumChannel& gamma_sb, const QuantumSpectra& spectra, const ThermalContext& ctx,
                    double level_tol) {
  const std::size_t ds = spectra.ds();
  const std::size_t db = spectra.db();
  const std::size_t dsb = ds * db;
  if (gamma_sb.in_dim != dsb || gamma_sb.out_dim != dsb) throw DimensionError("channel does not act on system (x) bath");
  std::vector<double> e_in(dsb);
  std::vector<double> e_out(dsb);
  for (std::size_t c = 0; c < dsb; ++c) {
    e_in[c] = spectra.system_initial.energy(c / db) + spectra.bath[c % db];
    e_out[c] = spectra.system_final.energy(c / db) + spectra.bath[c % db];
  }
  // Group basis states into eigenspaces; levels ascending.
  auto group = [&](const std::vector<double>& e, std::vector<double>& levels, std::vector<std::size_t>& degeneracy) {
    std::vector<std::size_t> label(e.size());
    std::vector<double> sorted = e;
    std::sort(sorted.begin(), sorted.end());
    for (double x : sorted)
      if (levels.empty() || x - levels.back() > level_tol) levels.push_back(x);
    degeneracy.assign(levels.size(), 0);
    for (std::size_t c = 0; c < e.size(); ++c) {
      std::size_t k = 0;
      while (k + 1 < levels.size() && std::abs(e[c] - levels[k]) > level_tol) ++k;
      label[c] = k;
      ++degeneracy[k];
    }
    return label;
  };
  TpmReport r;
  const auto in_label = group(e_in, r.initial_levels, r.initial_degeneracy);
  const auto out_label = group(e_out, r.final_levels, r.final_degeneracy);
  r.matrix = Eigen::MatrixXd::Zero(ix(r.initial_levels.size()), ix(r.final_levels.size()));
  for (std::size_t c = 0; c < dsb; ++c) {
    const CMatrix out = gamma_sb.apply_unit(c, c);
    for (std::size_t cp = 0; cp < dsb; ++cp) r.matrix(ix(in_label[c]), ix(out_label[cp])) += out(ix(cp), ix(cp)).real();
  }
  for (std::size_t a = 0; a < r.initial_levels.size(); ++a) r.matrix.row(ix(a)) /= static_cast<double>(r.initial_degeneracy[a]);

  for (Eigen::Index a = 0; a < r.matrix.rows(); ++a) r.row_error = std::max(r.row_error, std::abs(r.matrix.row(a).sum() - 1.0));
  for (Eigen::Index b = 0; b < r.matrix.cols(); ++b) {
    double sum = 0.0;
    for (Eigen::Index a = 0; a < r.matrix.rows(); ++a) sum += static_cast<double>(r.initial_degeneracy[static_cast<std::size_t>(a)]) * r.matrix(a, b);
    r.column_error = std::max(r.column_error, std::abs(sum / static_cast<double>(r.final_degeneracy[static_cast<std::size_t>(b)]) - 1.0));
  }

  const double z = partition_function(spectra.system_initial, ctx);
  const double zp = partition_function(spectra.system_final, ctx);
  double zb = 0.0;
  for (double e : spectra.bath) zb += std::exp(-ctx.beta() * e);
  for (Eigen::Index a = 0; a < r.matrix.rows(); ++a) {
    const double ea = r.initial_levels[static_cast<std::size_t>(a)];
    const double pa = static_cast<double>(r.initial_degeneracy[static_cast<std::size_t>(a)]) * std::exp(-ctx.beta() * ea) / (z * zb);
    for (Eigen::Index b = 0; b < r.matrix.cols(); ++b) {
      r.jarzynski += pa * r.matrix(a, b) * std::exp(ctx.beta() * (ea - r.final_levels[static_cast<std::size_t>(b)]));
    }
  }
  r.target = zp / z;
  return r;
}

}  // namespace fluctwork
