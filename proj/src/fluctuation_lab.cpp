#include "fluctwork/fluctuation_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fluctwork/errors.hpp"
#include "fluctwork/gibbs_kernel.hpp"

namespace fluctwork {

namespace {

// beta v for one trajectory; only called where P(s) > 0 and P'(s') > 0.
double beta_excess(double beta, double e_initial, double e_final, double w, double p_initial, double p_final) {
  return beta * ((e_final - e_initial) + w) + std::log(p_final) - std::log(p_initial);
}

}  // namespace

IdentityReport make_report(std::string name, double computed, double target, double tol) {
  const double err = std::abs(computed - target);
  return IdentityReport{std::move(name), computed, target, err, err <= tol};
}

const IdentityReport& find_report(const std::vector<IdentityReport>& reports, const std::string& name) {
  auto it = std::find_if(reports.begin(), reports.end(), [&](const IdentityReport& r) { return r.name == name; });
  if (it == reports.end()) throw ArgumentError("no report named " + name);
  return *it;
}

double second_law_slack(const DiagState& state, const WorkKernel& kernel, const ThermalContext& ctx) {
  const Marginals m = marginals(state, kernel);
  return free_energy(kernel.initial(), ctx, state) - free_energy(kernel.final(), ctx, m.final_state) - m.mean_work;
}

std::vector<IdentityReport> classical_identities(const DiagState& state, const WorkKernel& kernel,
                                                 const ThermalContext& ctx, double tol) {
  require_aligned(state, kernel.initial(), "classical identities");
  const Marginals m = marginals(state, kernel);
  const double beta = ctx.beta();
  const auto& ei = kernel.initial().energies();
  const auto& ef = kernel.final().energies();
  const auto& grid = kernel.grid();

  double equality = 0.0;
  double direct = 0.0;
  double generalized = 0.0;
  double standard = 0.0;
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) {
    const double x = beta * ((ef[sp] - ei[s]) + grid[k]);
    equality += p * m.final_state[sp] * std::exp(x);
    generalized += p * std::exp(beta * grid[k] - beta * ei[s]);
    standard += state[s] * p * std::exp(beta * grid[k]);
    if (state[s] > 0.0) {
      direct += state[s] * p * std::exp(beta_excess(beta, ei[s], ef[sp], grid[k], state[s], m.final_state[sp]));
    }
  });

  const double z = partition_function(kernel.initial(), ctx);
  const double zp = partition_function(kernel.final(), ctx);
  std::vector<IdentityReport> out;
  out.push_back(make_report("second_law_equality", equality, 1.0, tol));
  if (state.full_support()) out.push_back(make_report("second_law_equality_direct", direct, 1.0, tol));
  out.push_back(make_report("generalized_jarzynski", generalized, zp, tol));
  if (is_thermal(state, kernel.initial(), ctx, tol)) {
    out.push_back(make_report("standard_jarzynski", standard, zp / z, tol));
  }
  const double slack = free_energy(kernel.initial(), ctx, state) -
                       free_energy(kernel.final(), ctx, m.final_state) - m.mean_work;
  IdentityReport inequality = make_report("second_law_inequality", slack, 0.0, tol);
  inequality.pass = slack >= -tol;
  out.push_back(inequality);
  return out;
}

std::vector<MomentSum> moment_inequalities(const DiagState& state, const WorkKernel& kernel,
                                           const ThermalContext& ctx, int n_max) {
  if (n_max < 1 || n_max % 2 == 0) throw ArgumentError("moment order must be a positive odd integer");
  require_aligned(state, kernel.initial(), "moment inequalities");
  const Marginals m = marginals(state, kernel);
  const auto& ei = kernel.initial().energies();
  const auto& ef = kernel.final().energies();
  // raw[k] = <(beta v)^k> / k!
  std::vector<double> raw(static_cast<std::size_t>(n_max) + 1, 0.0);
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) {
    const double joint = state[s] * p;
    if (joint <= 0.0) return;
    const double x = beta_excess(ctx.beta(), ei[s], ef[sp], kernel.grid()[k], state[s], m.final_state[sp]);
    double term = joint;
    for (int order = 1; order <= n_max; ++order) {
      term *= x / order;
      raw[static_cast<std::size_t>(order)] += term;
    }
  });
  std::vector<MomentSum> out;
  double partial = 0.0;
  for (int order = 1; order <= n_max; ++order) {
    partial += raw[static_cast<std::size_t>(order)];
    if (order % 2 == 1) out.push_back(MomentSum{order, partial});
  }
  return out;
}

CrooksTable crooks_table(const WorkKernel& kernel, const ThermalContext& ctx, double tol) {
  const double beta = ctx.beta();
  const double z = partition_function(kernel.initial(), ctx);
  const double zp = partition_function(kernel.final(), ctx);
  const WorkKernel back = backward_kernel(kernel, ctx);
  const auto& ei = kernel.initial().energies();
  const auto& ef = kernel.final().energies();
  const auto& grid = kernel.grid();
  const std::size_t g = grid.size();

  auto residual = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
  };

  CrooksTable table;
  // Support of forward and backward coincides for finite exponents; walking
  // both keeps a zero on either side visible.
  std::map<KernelKey, std::pair<double, double>> rows;
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) { rows[{s, sp, k}].first = p; });
  back.for_each([&](std::size_t sp, std::size_t s, std::size_t kb, double p) { rows[{s, sp, g - 1 - kb}].second = p; });

  std::vector<double> agg_forward(g, 0.0);
  std::vector<double> agg_back(g, 0.0);
  for (const auto& [key, probs] : rows) {
    CrooksRow row;
    row.s = key.s;
    row.s_prime = key.s_prime;
    row.w = grid[key.w];
    row.p_forward = probs.first * std::exp(-beta * ei[key.s]) / z;
    row.p_back = probs.second * std::exp(-beta * ef[key.s_prime]) / zp;
    const double expected_back = probs.first * std::exp(beta * row.w - beta * ei[key.s]) / zp;
    row.ratio_residual = residual(expected_back, row.p_back);
    table.max_row_residual = std::max(table.max_row_residual, row.ratio_residual);
    agg_forward[key.w] += row.p_forward;
    agg_back[key.w] += row.p_back;
    table.rows.push_back(row);
  }
  for (std::size_t k = 0; k < g; ++k) {
    if (agg_forward[k] == 0.0 && agg_back[k] == 0.0) continue;
    CrooksAggregate a{grid[k], agg_forward[k], agg_back[k], 0.0};
    a.ratio_residual = residual(agg_forward[k] * std::exp(beta * grid[k]) * z / zp, agg_back[k]);
    table.max_aggregate_residual = std::max(table.max_aggregate_residual, a.ratio_residual);
    table.aggregate.push_back(a);
  }
  table.pass = table.max_row_residual <= tol && table.max_aggregate_residual <= tol;
  return table;
}

ReversibilityReport reversibility_check(const DiagState& state, const WorkKernel& kernel, const ThermalContext& ctx,
                                        double tol) {
  require_aligned(state, kernel.initial(), "reversibility check");
  const Marginals m = marginals(state, kernel);
  const auto& ei = kernel.initial().energies();
  const auto& ef = kernel.final().energies();
  ReversibilityReport out;
  kernel.for_each([&](std::size_t s, std::size_t sp, std::size_t k, double p) {
    const double joint = state[s] * p;
    if (joint <= 0.0) return;
    const double x = beta_excess(ctx.beta(), ei[s], ef[sp], kernel.grid()[k], state[s], m.final_state[sp]);
    out.max_deviation = std::max(out.max_deviation, std::abs(x) * ctx.temperature());
    out.first_moment += joint * x;
  });
  out.reversible = out.max_deviation <= tol;
  return out;
}

LandauerConstraintCheck check_landauer(const LandauerSpec& spec, const ThermalContext& ctx, double tol) {
  if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0)) throw ArgumentError("epsilon must lie in [0, 1)");
  const double beta = ctx.beta();
  LandauerConstraintCheck out;
  // Gibbs sums of the two final levels; these are the constraints multiplied through by (1 - eps) and eps.
  out.success_residual =
      std::abs((1.0 - spec.epsilon) * (std::exp(beta * spec.w0) + std::exp(beta * spec.w1)) - 1.0);
  if (spec.epsilon > 0.0) {
    out.failure_residual = std::abs(spec.epsilon * (std::exp(beta * spec.wbar0) + std::exp(beta * spec.wbar1)) - 1.0);
  }
  out.pass = out.success_residual <= tol && out.failure_residual <= tol;
  return out;
}

double landauer_mean_work(const LandauerSpec& spec) {
  const double fail = spec.epsilon > 0.0 ? spec.epsilon * 0.5 * (spec.wbar0 + spec.wbar1) : 0.0;
  return (1.0 - spec.epsilon) * 0.5 * (spec.w0 + spec.w1) + fail;
}

WorkKernel landauer_kernel(const LandauerSpec& spec) {
  if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0)) throw ArgumentError("epsilon must lie in [0, 1)");
  const EnergySpectrum qubit({{"0", 0.0}, {"1", 0.0}});
  std::vector<double> values{spec.w0, spec.w1};
  if (spec.epsilon > 0.0) {
    values.push_back(spec.wbar0);
    values.push_back(spec.wbar1);
  }
  WorkKernel kernel(qubit, qubit, WorkGrid(values));
  const auto& grid = kernel.grid();
  kernel.add(0, 0, *grid.find(spec.w0), 1.0 - spec.epsilon);
  kernel.add(1, 0, *grid.find(spec.w1), 1.0 - spec.epsilon);
  if (spec.epsilon > 0.0) {
    kernel.add(0, 1, *grid.find(spec.wbar0), spec.epsilon);
    kernel.add(1, 1, *grid.find(spec.wbar1), spec.epsilon);
  }
  return kernel;
}

std::optional<double> landauer_failure_work(double epsilon, const ThermalContext& ctx) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ArgumentError("epsilon must lie in [0, 1)");
  if (epsilon == 0.0) return std::nullopt;
  return ctx.temperature() * std::log(1.0 / (2.0 * epsilon));
}

LandauerCurve landauer_tradeoff(double epsilon, const ThermalContext& ctx, const std::vector<double>& w0_grid) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ArgumentError("epsilon must lie in [0, 1)");
  LandauerCurve curve;
  curve.epsilon = epsilon;
  curve.failure_work = landauer_failure_work(epsilon, ctx);
  const double fail = curve.failure_work ? epsilon * *curve.failure_work : 0.0;
  curve.domain_negative = true;
  for (double w0 : w0_grid) {
    LandauerPoint pt;
    pt.w0 = w0;
    const double rest = 1.0 / (1.0 - epsilon) - std::exp(ctx.beta() * w0);
    pt.feasible = std::isfinite(w0) && rest > 0.0;
    if (pt.feasible) {
      pt.w1 = ctx.temperature() * std::log(rest);
      pt.mean_work = (1.0 - epsilon) * 0.5 * (pt.w0 + pt.w1) + fail;
      pt.mean_cost = -pt.mean_work;
      curve.domain_negative = curve.domain_negative && pt.w0 < 0.0 && pt.w1 < 0.0;
      if (!curve.optimum || pt.mean_cost < curve.points[*curve.optimum].mean_cost) curve.optimum = curve.points.size();
    } else {
      pt.w1 = std::numeric_limits<double>::quiet_NaN();
      pt.mean_work = std::numeric_limits<double>::quiet_NaN();
      pt.mean_cost = std::numeric_limits<double>::quiet_NaN();
    }
    curve.points.push_back(pt);
  }
  return curve;
}

std::vector<double> landauer_sweep_grid(double epsilon, const ThermalContext& ctx, std::size_t n) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ArgumentError("epsilon must lie in [0, 1)");
  if (n == 0) throw ArgumentError("sweep needs at least one point");
  const double t = ctx.temperature();
  const double w_max = t * std::log(1.0 / (1.0 - epsilon));
  const double step = 6.0 * t / static_cast<double>(n);
  std::vector<double> grid;
  for (std::size_t i = 0; i < n; ++i) grid.push_back(w_max - 6.0 * t + static_cast<double>(i) * step);
  grid.push_back(t * std::log(1.0 / (2.0 * (1.0 - epsilon))));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace fluctwork
