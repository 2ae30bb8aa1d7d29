#include "fluctwork/quantum_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fluctwork/errors.hpp"
#include "fluctwork/fluctuation_lab.hpp"
#include "fluctwork/gibbs_kernel.hpp"
#include "fluctwork/quantum_identities.hpp"
#include "fluctwork/random.hpp"

namespace fluctwork {

namespace {

struct Draw {
  double beta;
  double delta;
  std::vector<double> initial;
  std::vector<double> final;
  std::vector<double> bath;
};

// Energies are small integer multiples of delta so every step fits a 16-site ladder.
Draw draw_energies(Rng& rng, std::size_t bath_dim) {
  Draw d;
  d.beta = rng.uniform(0.2, 3.0);
  d.delta = rng.uniform() < 0.5 ? 0.25 : 0.5;
  d.initial = {0.0, d.delta * static_cast<double>(1 + rng.below(2))};
  d.final = {0.0, d.delta * static_cast<double>(1 + rng.below(3))};
  std::vector<int> pool{0, 1, 2, 3};
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
  pool.resize(bath_dim);
  std::sort(pool.begin(), pool.end());
  for (int k : pool) d.bath.push_back(d.delta * k);
  return d;
}

double report_error(const std::vector<IdentityReport>& reports, const char* name) {
  return find_report(reports, name).abs_error;
}

}  // namespace

QuantumInstance make_quantum_instance(std::uint64_t seed, std::size_t bath_dim, std::size_t ladder_dim,
                                      bool permutation) {
  if (bath_dim < 1 || bath_dim > 4) throw ArgumentError("bath dimension must be in 1..4");
  Rng rng(Rng::stream_seed(seed, 0));
  Draw d = draw_energies(rng, bath_dim);
  QuantumSpectra spectra{EnergySpectrum::from_energies(d.initial), EnergySpectrum::from_energies(d.final), d.bath};
  WeightLadder ladder(ladder_dim, d.delta);
  const std::size_t n = 2 * bath_dim;
  CMatrix v;
  if (permutation) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    v = phased_permutation(perm, rng);
  } else {
    v = random_unitary(n, rng);
  }
  EnergyConservingUnitary u = build_energy_conserving_unitary(v, spectra, ladder);
  if (guard_band(u).size() == 0) throw CapacityError("weight ladder too short for the energy steps");
  return QuantumInstance{seed, ThermalContext(d.beta), std::move(spectra), ladder, std::move(v), std::move(u)};
}

QuantumRecord evaluate_quantum_instance(const QuantumInstance& in, Exec exec) {
  QuantumRecord r;
  r.seed = in.seed;
  r.bath_dim = in.spectra.db();
  r.ladder_dim = in.ladder.dim();
  const GuardBand band = guard_band(in.u);
  r.guard_band = band.size();

  r.unitarity = unitarity_error(in.u.u);
  r.covariance = translation_covariance_error(in.u, in.ladder);
  r.energy_bookkeeping = energy_bookkeeping_error(in.u, in.spectra, in.ladder);

  const ChannelPair channels = channels_from_unitary(in.u, in.spectra, in.ctx);
  Rng rng(Rng::stream_seed(in.seed, 1));
  std::vector<std::size_t> support;
  for (std::size_t x = band.begin; x < band.end; ++x) support.push_back(x);
  const CMatrix rho_w = random_pure_state(in.ladder.dim(), support, rng);
  r.gibbs_stochastic = quantum_gibbs_stochastic_deviation(channels.forward, in.spectra, in.ladder, rho_w, in.ctx);

  const CMatrix rho_s = random_density(in.spectra.ds(), rng);
  const auto general = quantum_identities(rho_s, rho_w, channels.forward, in.spectra, in.ladder, in.ctx, false);
  r.second_law = report_error(general.reports, "quantum_second_law");
  r.jarzynski = report_error(general.reports, "quantum_jarzynski");

  CMatrix diag = CMatrix::Zero(2, 2);
  const double p = rng.uniform(0.1, 0.9);
  diag(0, 0) = p;
  diag(1, 1) = 1.0 - p;
  const std::size_t mid = band.begin + band.size() / 2;
  const auto cq = quantum_identities(diag, in.ladder.position_state(mid), channels.forward, in.spectra, in.ladder,
                                     in.ctx, true);
  r.cq_second_law = report_error(cq.reports, "classical_quantum_second_law");
  r.cq_jarzynski = report_error(cq.reports, "classical_quantum_jarzynski");

  const CrooksDistance crooks = quantum_crooks_check(in.u, channels, in.spectra, in.ladder, in.ctx, exec);
  r.crooks = crooks.distance;
  r.crooks_inputs = crooks.inputs;

  const std::size_t dsb = in.spectra.ds() * in.spectra.db();
  const QuantumChannel mixed = system_bath_channel(in.u, in.ladder.maximally_mixed());
  const TpmReport tpm = tpm_check(mixed, in.spectra, in.ctx);
  r.tpm_row = tpm.row_error;
  r.tpm_column = tpm.column_error;
  r.tpm_jarzynski = std::abs(tpm.jarzynski - tpm.target);
  const CMatrix id = CMatrix::Identity(static_cast<Eigen::Index>(dsb), static_cast<Eigen::Index>(dsb));
  r.unitality = (mixed.apply(id) - id).cwiseAbs().maxCoeff();

  const QuantumChannel coherent = system_bath_channel(in.u, in.ladder.momentum_state(rng.below(in.ladder.dim())));
  std::vector<std::size_t> all(dsb);
  std::iota(all.begin(), all.end(), std::size_t{0});
  r.purity = std::abs(1.0 - purity(coherent.apply(random_pure_state(dsb, all, rng))));
  return r;
}

IntegrationRecord evaluate_integration(std::uint64_t seed, std::size_t bath_dim, std::size_t ladder_dim) {
  const QuantumInstance in = make_quantum_instance(seed, bath_dim, ladder_dim, true);
  const GuardBand band = guard_band(in.u);
  const std::size_t x0 = band.begin + band.size() / 2;
  const ChannelPair channels = channels_from_unitary(in.u, in.spectra, in.ctx);
  const WorkKernel kernel = induced_classical_kernel(channels.forward, in.spectra, in.ladder, x0);

  IntegrationRecord r;
  r.seed = seed;
  const GibbsValidation g = validate_gibbs_stochastic(kernel, in.ctx, 1e-8);
  r.induced_gibbs_deviation = g.max_gibbs_deviation;
  r.induced_row_deviation = g.max_row_deviation;

  Rng rng(Rng::stream_seed(seed, 2));
  const double p = rng.uniform(0.1, 0.9);
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = p;
  diag(1, 1) = 1.0 - p;
  const auto quantum = quantum_identities(diag, in.ladder.position_state(x0), channels.forward, in.spectra, in.ladder,
                                          in.ctx, true);
  const auto classical = classical_identities(DiagState({p, 1.0 - p}), kernel, in.ctx);
  const std::pair<const char*, const char*> pairs[] = {
      {"second_law_equality", "classical_quantum_second_law"},
      {"generalized_jarzynski", "classical_quantum_jarzynski"},
  };
  for (const auto& [c, q] : pairs) {
    const double diff = std::abs(find_report(classical, c).computed - find_report(quantum.reports, q).computed);
    r.value_mismatch = std::max(r.value_mismatch, diff);
  }
  return r;
}

std::vector<std::string> quantum_violations(const QuantumRecord& r) {
  std::vector<std::string> out;
  const auto check = [&](const char* name, double value, double tol) {
    if (!(value <= tol)) out.emplace_back(name);
  };
  check("unitarity", r.unitarity, 1e-10);
  check("covariance", r.covariance, 1e-10);
  check("energy_bookkeeping", r.energy_bookkeeping, 1e-10);
  check("gibbs_stochastic", r.gibbs_stochastic, 1e-8);
  check("second_law", r.second_law, 1e-8);
  check("jarzynski", r.jarzynski, 1e-8);
  check("cq_second_law", r.cq_second_law, 1e-8);
  check("cq_jarzynski", r.cq_jarzynski, 1e-8);
  check("crooks", r.crooks, 1e-9);
  check("tpm_row", r.tpm_row, 1e-10);
  check("tpm_column", r.tpm_column, 1e-10);
  check("tpm_jarzynski", r.tpm_jarzynski, 1e-9);
  check("unitality", r.unitality, 1e-10);
  check("purity", r.purity, 1e-8);
  if (r.guard_band == 0) out.emplace_back("guard_band");
  return out;
}

std::vector<std::string> integration_violations(const IntegrationRecord& r) {
  std::vector<std::string> out;
  if (!(r.induced_gibbs_deviation <= 1e-8)) out.emplace_back("induced_gibbs_deviation");
  if (!(r.induced_row_deviation <= 1e-8)) out.emplace_back("induced_row_deviation");
  if (!(r.value_mismatch <= 1e-8)) out.emplace_back("value_mismatch");
  return out;
}

}  // namespace fluctwork
