#include "fluctwork/quantum_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fluctwork/errors.hpp"

namespace fluctwork {

namespace {

using cd = std::complex<double>;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<double> bath_weights(const std::vector<double>& bath, const ThermalContext& ctx) {
  std::vector<double> g(bath.size());
  double z = 0.0;
  for (std::size_t b = 0; b < bath.size(); ++b) z += g[b] = std::exp(-ctx.beta() * bath[b]);
  for (double& x : g) x /= z;
  return g;
}

QuantumChannel bath_traced(const CMatrix& u, std::size_t ds, std::size_t db, std::size_t dw,
                           const std::vector<double>& gamma) {
  QuantumChannel ch;
  ch.in_dim = ds * dw;
  ch.out_dim = ds * dw;
  for (std::size_t bp = 0; bp < db; ++bp) {
    for (std::size_t b = 0; b < db; ++b) {
      CMatrix k = CMatrix::Zero(ix(ds * dw), ix(ds * dw));
      const double amp = std::sqrt(gamma[b]);
      for (std::size_t sp = 0; sp < ds; ++sp)
        for (std::size_t np = 0; np < dw; ++np)
          for (std::size_t s = 0; s < ds; ++s)
            for (std::size_t n = 0; n < dw; ++n)
              k(ix(sp * dw + np), ix(s * dw + n)) = amp * u(ix((sp * db + bp) * dw + np), ix((s * db + b) * dw + n));
      if (max_abs(k) > 0.0) ch.kraus.push_back(std::move(k));
    }
  }
  return ch;
}

}  // namespace

WeightLadder::WeightLadder(std::size_t dim, double delta) : dim_(dim), delta_(delta) {
  if (dim < 3) throw ArgumentError("weight ladder needs at least 3 levels");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ArgumentError("weight spacing must be positive");
}

CMatrix WeightLadder::shift(std::int64_t m) const {
  const auto l = static_cast<std::int64_t>(dim_);
  CMatrix s = CMatrix::Zero(ix(dim_), ix(dim_));
  for (std::int64_t n = 0; n < l; ++n) s(((n + m) % l + l) % l, n) = 1.0;
  return s;
}

std::vector<double> WeightLadder::energies() const {
  std::vector<double> e(dim_);
  for (std::size_t n = 0; n < dim_; ++n) e[n] = static_cast<double>(n) * delta_;
  return e;
}

CMatrix WeightLadder::position_state(std::size_t n) const {
  if (n >= dim_) throw ArgumentError("ladder position out of range");
  CMatrix r = CMatrix::Zero(ix(dim_), ix(dim_));
  r(ix(n), ix(n)) = 1.0;
  return r;
}

CMatrix WeightLadder::momentum_state(std::size_t k) const {
  CVector v(ix(dim_));
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim_));
  for (std::size_t n = 0; n < dim_; ++n) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * n % dim_) / static_cast<double>(dim_);
    v(ix(n)) = std::polar(norm, phase);
  }
  return v * v.adjoint();
}

CMatrix WeightLadder::maximally_mixed() const {
  return CMatrix::Identity(ix(dim_), ix(dim_)) / static_cast<double>(dim_);
}

EnergyConservingUnitary build_energy_conserving_unitary(const CMatrix& v, const QuantumSpectra& spectra,
                                                        const WeightLadder& ladder) {
  const std::size_t ds = spectra.ds();
  const std::size_t db = spectra.db();
  const std::size_t dsb = ds * db;
  const std::size_t dw = ladder.dim();
  if (spectra.system_final.size() != ds) throw DimensionError("initial and final system dimensions differ");
  if (db == 0) throw DimensionError("empty bath");
  if (static_cast<std::size_t>(v.rows()) != dsb || static_cast<std::size_t>(v.cols()) != dsb) {
    throw DimensionError("V must act on system (x) bath");
  }
  if (unitarity_error(v) > 1e-10) throw ArgumentError("V is not unitary");

  EnergyConservingUnitary out;
  out.ds = ds;
  out.db = db;
  out.dw = dw;
  out.steps.assign(dsb * dsb, 0);
  out.u = CMatrix::Zero(ix(dsb * dw), ix(dsb * dw));
  const auto l = static_cast<std::int64_t>(dw);
  for (std::size_t cp = 0; cp < dsb; ++cp) {
    const double ef = spectra.system_final.energy(cp / db) + spectra.bath[cp % db];
    for (std::size_t c = 0; c < dsb; ++c) {
      const double ei = spectra.system_initial.energy(c / db) + spectra.bath[c % db];
      const double q = (ei - ef) / ladder.delta();
      const double r = std::round(q);
      if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) {
        throw CommensurabilityError("energy difference " + std::to_string(ei - ef) +
                                    " is not a multiple of the ladder spacing");
      }
      const auto step = static_cast<std::int64_t>(r);
      out.steps[cp * dsb + c] = step;
      const cd vc = v(ix(cp), ix(c));
      if (std::abs(vc) > 1e-15) out.max_step = std::max(out.max_step, std::abs(step));
      if (vc == cd(0.0)) continue;
      for (std::int64_t n = 0; n < l; ++n) {
        const std::int64_t np = ((n + step) % l + l) % l;
        out.u(ix(cp * dw) + np, ix(c * dw) + n) = vc;
      }
    }
  }
  return out;
}

GuardBand guard_band(const EnergyConservingUnitary& u) {
  const auto m = static_cast<std::size_t>(u.max_step);
  return GuardBand{m, u.dw > m ? u.dw - m : 0};
}

double unitarity_error(const CMatrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("unitary must be square");
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

double translation_covariance_error(const EnergyConservingUnitary& u, const WeightLadder& ladder) {
  const CMatrix t = kron(CMatrix::Identity(ix(u.ds * u.db), ix(u.ds * u.db)), ladder.shift(1));
  return max_abs(u.u * t - t * u.u);
}

double energy_bookkeeping_error(const EnergyConservingUnitary& u, const QuantumSpectra& spectra,
                                const WeightLadder& ladder) {
  const GuardBand band = guard_band(u);
  const std::size_t dsb = u.ds * u.db;
  double worst = 0.0;
  for (std::size_t c = 0; c < dsb; ++c) {
    const double ei = spectra.system_initial.energy(c / u.db) + spectra.bath[c % u.db];
    for (std::size_t n = band.begin; n < band.end; ++n) {
      for (std::size_t cp = 0; cp < dsb; ++cp) {
        const double ef = spectra.system_final.energy(cp / u.db) + spectra.bath[cp % u.db];
        for (std::size_t np = 0; np < u.dw; ++np) {
          if (std::abs(u.u(ix(cp * u.dw + np), ix(c * u.dw + n))) <= 1e-14) continue;
          const double before = ei + static_cast<double>(n) * ladder.delta();
          const double after = ef + static_cast<double>(np) * ladder.delta();
          worst = std::max(worst, std::abs(after - before));
        }
      }
    }
  }
  return worst;
}

CMatrix QuantumChannel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(ix(out_dim), ix(out_dim));
  for (const auto& k : kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

CMatrix QuantumChannel::apply_dual(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(ix(in_dim), ix(in_dim));
  for (const auto& k : kraus) out.noalias() += k.adjoint() * x * k;
  return out;
}

CMatrix QuantumChannel::apply_unit(std::size_t i, std::size_t j) const {
  CMatrix out = CMatrix::Zero(ix(out_dim), ix(out_dim));
  for (const auto& k : kraus) out.noalias() += k.col(ix(i)) * k.col(ix(j)).adjoint();
  return out;
}

CMatrix QuantumChannel::apply_dual_unit(std::size_t i, std::size_t j) const {
  CMatrix out = CMatrix::Zero(ix(in_dim), ix(in_dim));
  for (const auto& k : kraus) out.noalias() += k.row(ix(i)).adjoint() * k.row(ix(j));
  return out;
}

double QuantumChannel::trace_preservation_error() const {
  CMatrix sum = CMatrix::Zero(ix(in_dim), ix(in_dim));
  for (const auto& k : kraus) sum.noalias() += k.adjoint() * k;
  return max_abs(sum - CMatrix::Identity(ix(in_dim), ix(in_dim)));
}

QuantumChannel unitary_channel(const CMatrix& v) {
  if (v.rows() != v.cols()) throw DimensionError("unitary must be square");
  return QuantumChannel{{v}, static_cast<std::size_t>(v.cols()), static_cast<std::size_t>(v.rows())};
}

ChannelPair channels_from_unitary(const EnergyConservingUnitary& u, const QuantumSpectra& spectra,
                                  const ThermalContext& ctx) {
  if (spectra.ds() != u.ds || spectra.db() != u.db) throw DimensionError("spectra do not match the unitary");
  const auto gamma = bath_weights(spectra.bath, ctx);
  return ChannelPair{bath_traced(u.u, u.ds, u.db, u.dw, gamma), bath_traced(u.u.adjoint(), u.ds, u.db, u.dw, gamma)};
}

CMatrix backward_dual_integral(const EnergyConservingUnitary& u, const QuantumSpectra& spectra,
                               const ThermalContext& ctx, const CMatrix& x) {
  const std::size_t ds = u.ds;
  const std::size_t db = u.db;
  const std::size_t dw = u.dw;
  if (static_cast<std::size_t>(x.rows()) != ds * dw || x.rows() != x.cols()) {
    throw DimensionError("operator must act on system (x) weight");
  }
  const auto gamma = bath_weights(spectra.bath, ctx);
  CMatrix big = CMatrix::Zero(u.u.rows(), u.u.cols());
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t s2 = 0; s2 < ds; ++s2)
      for (std::size_t b = 0; b < db; ++b)
        for (std::size_t n = 0; n < dw; ++n)
          for (std::size_t n2 = 0; n2 < dw; ++n2)
            big(ix((s * db + b) * dw + n), ix((s2 * db + b) * dw + n2)) = x(ix(s * dw + n), ix(s2 * dw + n2));
  const CMatrix y = u.u * big * u.u.adjoint();
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t s2 = 0; s2 < ds; ++s2)
      for (std::size_t b = 0; b < db; ++b)
        for (std::size_t n = 0; n < dw; ++n)
          for (std::size_t n2 = 0; n2 < dw; ++n2)
            out(ix(s * dw + n), ix(s2 * dw + n2)) += gamma[b] * y(ix((s * db + b) * dw + n), ix((s2 * db + b) * dw + n2));
  return out;
}

QuantumChannel system_bath_channel(const EnergyConservingUnitary& u, const CMatrix& rho_w) {
  const std::size_t dsb = u.ds * u.db;
  const std::size_t dw = u.dw;
  if (static_cast<std::size_t>(rho_w.rows()) != dw || rho_w.rows() != rho_w.cols()) {
    throw DimensionError("weight state does not match the ladder");
  }
  const EigenSystem es = jacobi_eigensystem(rho_w);
  QuantumChannel ch;
  ch.in_dim = dsb;
  ch.out_dim = dsb;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    if (es.values(j) <= 1e-15) continue;
    const double amp = std::sqrt(es.values(j));
    for (std::size_t np = 0; np < dw; ++np) {
      CMatrix k = CMatrix::Zero(ix(dsb), ix(dsb));
      for (std::size_t cp = 0; cp < dsb; ++cp)
        for (std::size_t c = 0; c < dsb; ++c) {
          cd acc = 0.0;
          for (std::size_t n = 0; n < dw; ++n) acc += u.u(ix(cp * dw + np), ix(c * dw + n)) * es.vectors(ix(n), j);
          k(ix(cp), ix(c)) = amp * acc;
        }
      if (max_abs(k) > 0.0) ch.kraus.push_back(std::move(k));
    }
  }
  return ch;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix trace_out_weight(const CMatrix& x, std::size_t ds, std::size_t dw) {
  CMatrix out = CMatrix::Zero(ix(ds), ix(ds));
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t s2 = 0; s2 < ds; ++s2)
      for (std::size_t n = 0; n < dw; ++n) out(ix(s), ix(s2)) += x(ix(s * dw + n), ix(s2 * dw + n));
  return out;
}

CMatrix trace_out_system(const CMatrix& x, std::size_t ds, std::size_t dw) {
  CMatrix out = CMatrix::Zero(ix(dw), ix(dw));
  for (std::size_t s = 0; s < ds; ++s) out += x.block(ix(s * dw), ix(s * dw), ix(dw), ix(dw));
  return out;
}

CMatrix pinching(const CMatrix& rho, const std::vector<double>& energies, double tol) {
  if (static_cast<std::size_t>(rho.rows()) != energies.size()) throw DimensionError("pinching dimension mismatch");
  CMatrix out = rho;
  for (std::size_t i = 0; i < energies.size(); ++i)
    for (std::size_t j = 0; j < energies.size(); ++j)
      if (std::abs(energies[i] - energies[j]) > tol) out(ix(i), ix(j)) = 0.0;
  return out;
}

double commutator_with_diagonal(const CMatrix& rho, const std::vector<double>& energies) {
  if (static_cast<std::size_t>(rho.rows()) != energies.size()) throw DimensionError("commutator dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i)
    for (std::size_t j = 0; j < energies.size(); ++j)
      worst = std::max(worst, std::abs((energies[i] - energies[j]) * rho(ix(i), ix(j))));
  return worst;
}

double purity(const CMatrix& rho) { return (rho * rho).trace().real(); }

CMatrix gibbs_matrix(const std::vector<double>& energies, const ThermalContext& ctx) {
  const auto g = bath_weights(energies, ctx);
  CMatrix out = CMatrix::Zero(ix(g.size()), ix(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) out(ix(i), ix(i)) = g[i];
  return out;
}

GibbsSuperoperator::GibbsSuperoperator(const CMatrix& h, const ThermalContext& ctx, bool inverse)
    : half_(hermitian_exp(h, (inverse ? -0.5 : 0.5) * ctx.beta())) {}

GibbsSuperoperator GibbsSuperoperator::from_half(CMatrix half) { return GibbsSuperoperator(std::move(half)); }

CMatrix random_unitary(std::size_t n, Rng& rng) {
  CMatrix a(ix(n), ix(n));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = cd(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const cd d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_density(std::size_t n, Rng& rng) {
  CMatrix a(ix(n), ix(n));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = cd(rng.normal(), rng.normal());
  CMatrix rho = a * a.adjoint() + 0.05 * static_cast<double>(n) * CMatrix::Identity(ix(n), ix(n));
  rho = 0.5 * (rho + rho.adjoint());
  return rho / rho.trace().real();
}

CMatrix random_pure_state(std::size_t n, const std::vector<std::size_t>& support, Rng& rng) {
  if (support.empty()) throw ArgumentError("pure state needs a nonempty support");
  CVector v = CVector::Zero(ix(n));
  for (std::size_t i : support) {
    if (i >= n) throw ArgumentError("support index out of range");
    v(ix(i)) = cd(rng.normal(), rng.normal());
  }
  v /= v.norm();
  return v * v.adjoint();
}

CMatrix phased_permutation(const std::vector<std::size_t>& perm, Rng& rng) {
  const std::size_t n = perm.size();
  std::vector<bool> seen(n, false);
  CMatrix v = CMatrix::Zero(ix(n), ix(n));
  for (std::size_t c = 0; c < n; ++c) {
    if (perm[c] >= n || seen[perm[c]]) throw ArgumentError("not a permutation");
    seen[perm[c]] = true;
    v(ix(perm[c]), ix(c)) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  }
  return v;
}

}  // namespace fluctwork
