#include "fluctwork/gibbs_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluctwork/diagnostics.hpp"
#include "fluctwork/errors.hpp"
#include "fluctwork/random.hpp"

namespace fluctwork {

namespace {

// beta (E_s' - E_s + w). The backward map evaluates the same expression with the
// roles swapped; IEEE negation symmetry makes the two exponents exact negatives.
double gibbs_exponent(double beta, double e_initial, double e_final, double w) {
  return beta * ((e_final - e_initial) + w);
}

double log_sum_exp(const std::vector<double>& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : a) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : a) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

GibbsValidation validate_gibbs_stochastic(const WorkKernel& kernel, const ThermalContext& ctx, double tol) {
  GibbsValidation out;
  out.gibbs_sums.assign(kernel.final().size(), 0.0);
  out.row_sums.assign(kernel.initial().size(), 0.0);
  const auto& ei = kernel.initial().energies();
  const auto& ef = kernel.final().energies();
  const auto& grid = kernel.grid();
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) {
    out.gibbs_sums[sp] += p * std::exp(gibbs_exponent(ctx.beta(), ei[s], ef[sp], grid[k]));
    out.row_sums[s] += p;
  });
  for (double g : out.gibbs_sums) out.max_gibbs_deviation = std::max(out.max_gibbs_deviation, std::abs(g - 1.0));
  for (double r : out.row_sums) out.max_row_deviation = std::max(out.max_row_deviation, std::abs(r - 1.0));
  out.pass = out.max_gibbs_deviation <= tol && out.max_row_deviation <= tol;
  return out;
}

WorkKernel backward_kernel(const WorkKernel& kernel, const ThermalContext& ctx) {
  const auto check = validate_gibbs_stochastic(kernel, ctx, 1e-9);
  if (check.max_gibbs_deviation > 1e-9) {
    warn("backward kernel of a kernel that is not Gibbs-stochastic (max deviation " +
         std::to_string(check.max_gibbs_deviation) + "); result is not normalized");
  }
  const std::size_t g = kernel.grid().size();
  WorkKernel back(kernel.final(), kernel.initial(), kernel.grid().negated());
  const auto& ei = kernel.initial().energies();
  const auto& ef = kernel.final().energies();
  for (const auto& [key, stored] : kernel.entries_) {
    const double x = gibbs_exponent(ctx.beta(), ei[key.s], ef[key.s_prime], kernel.grid()[key.w]);
    back.entries_[KernelKey{key.s_prime, key.s, g - 1 - key.w}] =
        WorkKernel::Stored{stored.base, stored.tilt + x};
  }
  return back;
}

Marginals marginals(const DiagState& state, const WorkKernel& kernel) {
  require_aligned(state, kernel.initial(), "marginals");
  if (kernel.max_row_deviation() > 1e-9) {
    throw PreconditionError("marginals require a row-normalized kernel");
  }
  std::vector<double> final_probs(kernel.final().size(), 0.0);
  std::vector<double> work(kernel.grid().size(), 0.0);
  double mean = 0.0;
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) {
    const double joint = state[s] * p;
    final_probs[sp] += joint;
    work[k] += joint;
    mean += joint * kernel.grid()[k];
  });
  return Marginals{DiagState(std::move(final_probs), true), std::move(work), mean};
}

WorkKernel random_kernel(const EnergySpectrum& initial, const EnergySpectrum& final, const WorkGrid& grid,
                         const ThermalContext& ctx, std::uint64_t seed) {
  const std::size_t d = initial.size();
  const std::size_t dp = final.size();
  const std::size_t g = grid.size();
  auto idx = [&](std::size_t s, std::size_t sp, std::size_t k) { return (s * dp + sp) * g + k; };

  Rng rng(seed);
  std::vector<double> p(d * dp * g);
  for (double& x : p) x = rng.uniform_positive();

  std::vector<double> weight(p.size());
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t sp = 0; sp < dp; ++sp)
      for (std::size_t k = 0; k < g; ++k)
        weight[idx(s, sp, k)] = std::exp(gibbs_exponent(ctx.beta(), initial.energy(s), final.energy(sp), grid[k]));

  // Alternating information projections: rows onto sum 1 (a plain rescale),
  // weighted columns onto sum 1 (an exponential tilt p *= exp(-lambda * weight)
  // with lambda found by Newton on a convex decreasing log-sum-exp).
  std::vector<double> terms;
  auto project_rows = [&] {
    for (std::size_t s = 0; s < d; ++s) {
      double sum = 0.0;
      for (std::size_t i = idx(s, 0, 0); i < idx(s + 1, 0, 0); ++i) sum += p[i];
      for (std::size_t i = idx(s, 0, 0); i < idx(s + 1, 0, 0); ++i) p[i] /= sum;
    }
  };
  auto project_column = [&](std::size_t sp) {
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
      terms.clear();
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t k = 0; k < g; ++k) {
          const std::size_t i = idx(s, sp, k);
          terms.push_back(std::log(p[i] * weight[i]) - lambda * weight[i]);
        }
      const double h = log_sum_exp(terms);
      double slope = 0.0;
      std::size_t t = 0;
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t k = 0; k < g; ++k, ++t) slope -= weight[idx(s, sp, k)] * std::exp(terms[t] - h);
      const double step = h / slope;
      lambda -= step;
      if (std::abs(h) < 1e-16 || std::abs(step) <= 1e-17 * std::max(1.0, std::abs(lambda))) break;
    }
    for (std::size_t s = 0; s < d; ++s)
      for (std::size_t k = 0; k < g; ++k) {
        const std::size_t i = idx(s, sp, k);
        p[i] *= std::exp(-lambda * weight[i]);
      }
  };
  auto deviations = [&] {
    double row_dev = 0.0;
    double col_dev = 0.0;
    for (std::size_t s = 0; s < d; ++s) {
      double sum = 0.0;
      for (std::size_t i = idx(s, 0, 0); i < idx(s + 1, 0, 0); ++i) sum += p[i];
      row_dev = std::max(row_dev, std::abs(sum - 1.0));
    }
    for (std::size_t sp = 0; sp < dp; ++sp) {
      double sum = 0.0;
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t k = 0; k < g; ++k) sum += p[idx(s, sp, k)] * weight[idx(s, sp, k)];
      col_dev = std::max(col_dev, std::abs(sum - 1.0));
    }
    return std::max(row_dev, col_dev);
  };

  bool converged = false;
  for (int sweep = 0; sweep < kRandomKernelMaxSweeps; ++sweep) {
    project_rows();
    for (std::size_t sp = 0; sp < dp; ++sp) project_column(sp);
    if (deviations() < kRandomKernelTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("random_kernel did not reach tolerance 1e-13 after " +
                           std::to_string(kRandomKernelMaxSweeps) +
                           " sweeps; the grid may not admit a Gibbs-stochastic kernel");
  }

  WorkKernel kernel(initial, final, grid);
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t sp = 0; sp < dp; ++sp)
      for (std::size_t k = 0; k < g; ++k) kernel.set(s, sp, k, p[idx(s, sp, k)]);
  return kernel;
}

WorkKernel identity_kernel(const EnergySpectrum& spectrum) {
  WorkKernel k(spectrum, spectrum, WorkGrid({0.0}));
  for (std::size_t s = 0; s < spectrum.size(); ++s) k.set(s, s, 0, 1.0);
  return k;
}

WorkKernel thermal_reset_kernel(const EnergySpectrum& spectrum, const ThermalContext& ctx) {
  const DiagState g = gibbs_state(spectrum, ctx);
  WorkKernel k(spectrum, spectrum, WorkGrid({0.0}));
  for (std::size_t s = 0; s < spectrum.size(); ++s)
    for (std::size_t sp = 0; sp < spectrum.size(); ++sp) k.set(s, sp, 0, g[sp]);
  return k;
}

WorkKernel level_transformation_kernel(const EnergySpectrum& initial, const EnergySpectrum& final) {
  if (initial.size() != final.size()) {
    throw DimensionError("level transformation needs spectra of equal size");
  }
  std::vector<double> works;
  for (std::size_t s = 0; s < initial.size(); ++s) works.push_back(initial.energy(s) - final.energy(s));
  WorkGrid grid(works);
  WorkKernel k(initial, final, grid);
  for (std::size_t s = 0; s < initial.size(); ++s) {
    k.set(s, s, *grid.find(initial.energy(s) - final.energy(s)), 1.0);
  }
  return k;
}

}  // namespace fluctwork
