#include "fluctwork/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <map>

#include "fluctwork/errors.hpp"
#include "fluctwork/feasibility.hpp"
#include "fluctwork/finite_bath.hpp"
#include "fluctwork/fluctuation_lab.hpp"
#include "fluctwork/gibbs_kernel.hpp"
#include "fluctwork/majorize.hpp"
#include "fluctwork/quantum_suite.hpp"
#include "fluctwork/sampling.hpp"

namespace fluctwork {

namespace {

using json = nlohmann::json;

constexpr std::int64_t kDefaultSamples = 100000;
constexpr double kSamplingSigmas = 5.0;

struct Outcome {
  json body = json::object();
  std::vector<std::string> violations;
  std::string csv;
};

// --- CSV ---------------------------------------------------------------------------------------

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { line(header); }

  Csv& cell(const std::string& s) {
    cells_.push_back(s);
    return *this;
  }
  Csv& cell(double v) { return cell(csv_number(v)); }
  Csv& cell(std::uint64_t v) { return cell(std::to_string(v)); }
  void end() {
    line(cells_);
    cells_.clear();
  }
  std::string str() const { return out_; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  std::vector<std::string> cells_;
  std::string out_;
};

// --- JSON helpers ------------------------------------------------------------------------------

json kernel_json(const WorkKernel& k) {
  json rows = json::array();
  k.for_each([&](std::size_t s, std::size_t sp, std::size_t w, double p) {
    rows.push_back(json::array({k.initial().label(s), k.final().label(sp), k.grid()[w], p}));
  });
  return rows;
}

std::string kernel_csv(const WorkKernel& k) {
  Csv csv({"s", "s_prime", "w", "p"});
  k.for_each([&](std::size_t s, std::size_t sp, std::size_t w, double p) {
    csv.cell(k.initial().label(s)).cell(k.final().label(sp)).cell(k.grid()[w]).cell(p).end();
  });
  return csv.str();
}

json report_json(const IdentityReport& r) {
  return {{"name", r.name}, {"computed", r.computed}, {"target", r.target}, {"abs_error", r.abs_error},
          {"pass", r.pass}};
}

json curve_json(const ThermoCurve& c) {
  json pts = json::array();
  for (const auto& v : c.vertices) pts.push_back(json::array({v.x, v.y}));
  return pts;
}

void curve_rows(Csv& csv, const std::string& name, const ThermoCurve& c) {
  for (const auto& v : c.vertices) csv.cell(name).cell(v.x).cell(v.y).end();
}

json labelled(const EnergySpectrum& spectrum, const std::vector<double>& values) {
  json out = json::object();
  for (std::size_t i = 0; i < values.size(); ++i) out[spectrum.label(i)] = values[i];
  return out;
}

std::string timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// --- subcommands -------------------------------------------------------------------------------

Outcome cmd_validate(const ProblemDocument& doc) {
  const ThermalContext ctx = document_context(doc);
  const WorkKernel k = document_kernel(doc);
  const GibbsValidation g = validate_gibbs_stochastic(k, ctx, doc.tol);
  Outcome o;
  o.body = {{"gibbs_sums", labelled(k.final(), g.gibbs_sums)},
            {"row_sums", labelled(k.initial(), g.row_sums)},
            {"max_gibbs_deviation", g.max_gibbs_deviation},
            {"max_row_deviation", g.max_row_deviation},
            {"tol", doc.tol}};
  if (g.max_gibbs_deviation > doc.tol) o.violations.push_back("gibbs_stochastic");
  if (g.max_row_deviation > doc.tol) o.violations.push_back("row_normalization");
  Csv csv({"final_label", "gibbs_sum"});
  for (std::size_t i = 0; i < g.gibbs_sums.size(); ++i) csv.cell(k.final().label(i)).cell(g.gibbs_sums[i]).end();
  o.csv = csv.str();
  return o;
}

Outcome cmd_backward(const ProblemDocument& doc) {
  const ThermalContext ctx = document_context(doc);
  const WorkKernel k = document_kernel(doc);
  const GibbsValidation forward = validate_gibbs_stochastic(k, ctx, doc.tol);
  const WorkKernel back = backward_kernel(k, ctx);
  const GibbsValidation bv = validate_gibbs_stochastic(back, ctx, doc.tol);
  const bool exact = backward_kernel(back, ctx) == k;
  Outcome o;
  o.body = {{"forward_gibbs_stochastic", forward.pass},
            {"backward_kernel", kernel_json(back)},
            {"backward_max_gibbs_deviation", bv.max_gibbs_deviation},
            {"backward_max_row_deviation", bv.max_row_deviation},
            {"double_backward_exact", exact}};
  if (!forward.pass) o.violations.push_back("forward_gibbs_stochastic");
  if (!bv.pass) o.violations.push_back("backward_gibbs_stochastic");
  if (!exact) o.violations.push_back("double_backward_exact");
  o.csv = kernel_csv(back);
  return o;
}

Outcome cmd_realize(const ProblemDocument& doc) {
  const ThermalContext ctx = document_context(doc);
  const BathSpec spec = doc.bath.value_or(BathSpec{});
  const BathModel bath = BathModel::canonical(ctx, spec.half_range);
  const WorkKernel input =
      doc.random_kernel_seed
          ? random_dyadic_kernel(initial_spectrum(doc), final_spectrum(doc), document_grid(doc), ctx, spec.denom_bits,
                                 *doc.random_kernel_seed)
          : document_kernel(doc);
  const PermutationRealization r = realize_finite_bath(input, bath, ctx, spec.denom_bits);
  const RealizationCheck chk = verify_realization(r, input);
  Outcome o;
  o.body = {{"delta", bath.delta},
            {"half_range", bath.half_range},
            {"denom_bits", spec.denom_bits},
            {"total_microstates", r.total_microstates},
            {"boundary_microstates", r.boundary_microstates},
            {"boundary_fraction", r.boundary_fraction},
            {"segments", r.segments.size()},
            {"bijective", chk.bijective},
            {"energy_conserved", chk.energy_conserved},
            {"counting_identity", chk.counting_identity},
            {"induced_matches_dyadic", chk.induced_matches_dyadic},
            {"max_error_vs_input", chk.max_error_vs_input},
            {"error_bound", std::ldexp(1.0, -spec.denom_bits)},
            {"input_kernel", kernel_json(input)},
            {"induced_kernel", kernel_json(r.induced)}};
  if (!chk.bijective) o.violations.push_back("bijective");
  if (!chk.energy_conserved) o.violations.push_back("energy_conserved");
  if (!chk.counting_identity) o.violations.push_back("counting_identity");
  if (!chk.induced_matches_dyadic) o.violations.push_back("induced_matches_dyadic");
  if (chk.max_error_vs_input > std::ldexp(1.0, -spec.denom_bits)) o.violations.push_back("max_error_vs_input");
  Csv csv({"s", "j", "k_begin", "count", "s_prime", "j_prime", "k_target", "boundary"});
  for (const auto& seg : r.segments) {
    csv.cell(input.initial().label(seg.s))
        .cell(std::to_string(seg.j))
        .cell(seg.k_begin)
        .cell(seg.count)
        .cell(input.final().label(seg.s_prime))
        .cell(std::to_string(seg.j_prime))
        .cell(seg.k_target)
        .cell(seg.boundary ? "1" : "0")
        .end();
  }
  o.csv = csv.str();
  return o;
}

Outcome cmd_identities(const ProblemDocument& doc) {
  const ThermalContext ctx = document_context(doc);
  const WorkKernel k = document_kernel(doc);
  const DiagState state = initial_state(doc);
  Outcome o;
  json reports = json::array();
  Csv csv({"name", "computed", "target", "abs_error", "pass"});
  for (const auto& r : classical_identities(state, k, ctx, doc.tol)) {
    reports.push_back(report_json(r));
    csv.cell(r.name).cell(r.computed).cell(r.target).cell(r.abs_error).cell(r.pass ? "1" : "0").end();
    if (!r.pass) o.violations.push_back(r.name);
  }
  json moments = json::array();
  for (const auto& m : moment_inequalities(state, k, ctx, 7)) {
    moments.push_back({{"order", m.order}, {"partial_sum", m.partial_sum}});
    const bool ok = m.partial_sum <= doc.tol;
    csv.cell("moment_sum_" + std::to_string(m.order)).cell(m.partial_sum).cell(0.0).cell(0.0).cell(ok ? "1" : "0").end();
    if (!ok) o.violations.push_back("moment_sum_" + std::to_string(m.order));
  }
  const CrooksTable crooks = crooks_table(k, ctx, doc.tol);
  if (!crooks.pass) o.violations.push_back("crooks");
  const ReversibilityReport rev = reversibility_check(state, k, ctx, doc.tol);
  o.body = {{"identities", reports},
            {"moment_sums", moments},
            {"second_law_slack", second_law_slack(state, k, ctx)},
            {"crooks", {{"max_row_residual", crooks.max_row_residual},
                        {"max_aggregate_residual", crooks.max_aggregate_residual},
                        {"pass", crooks.pass}}},
            {"reversibility", {{"reversible", rev.reversible},
                               {"max_deviation", rev.max_deviation},
                               {"first_moment", rev.first_moment}}},
            {"tol", doc.tol}};
  o.csv = csv.str();
  return o;
}

json estimate_json(const MonteCarloEstimate& e, double target) {
  return {{"mean", e.mean},
          {"standard_error", e.standard_error},
          {"effective_fraction", e.effective_fraction},
          {"reliable", e.reliable},
          {"target", target}};
}

Outcome cmd_sample(const ProblemDocument& doc) {
  const ThermalContext ctx = document_context(doc);
  const WorkKernel k = document_kernel(doc);
  const DiagState state = initial_state(doc);
  const std::int64_t n = doc.samples.value_or(kDefaultSamples);
  const SamplingReport rep = sample_trajectories(state, k, ctx, doc.seed, n);
  const double zp = partition_function(k.final(), ctx);
  Outcome o;
  const auto judge = [&](const char* name, const MonteCarloEstimate& e, double target) {
    if (e.reliable && std::abs(e.mean - target) > kSamplingSigmas * e.standard_error + doc.tol)
      o.violations.push_back(name);
  };
  judge("second_law_equality", rep.second_law, 1.0);
  judge("generalized_jarzynski", rep.jarzynski, zp);
  json kept = json::array();
  Csv csv({"s", "s_prime", "w", "v"});
  for (const auto& t : rep.samples) {
    kept.push_back(json::array({k.initial().label(t.s), k.final().label(t.s_prime), t.w, t.v}));
    csv.cell(k.initial().label(t.s)).cell(k.final().label(t.s_prime)).cell(t.w).cell(t.v).end();
  }
  o.body = {{"samples", rep.n},
            {"streams", rep.streams},
            {"seed", doc.seed},
            {"second_law_equality", estimate_json(rep.second_law, 1.0)},
            {"generalized_jarzynski", estimate_json(rep.jarzynski, zp)},
            {"sigmas", kSamplingSigmas},
            {"first_samples", kept}};
  o.csv = csv.str();
  return o;
}

Outcome cmd_curve(const ProblemDocument& doc) {
  const ThermalContext ctx = document_context(doc);
  const EnergySpectrum initial = initial_spectrum(doc);
  const DiagState rho = initial_state(doc);
  Outcome o;
  Csv csv({"curve", "x", "y"});
  if (!doc.final || !doc.final->state) {
    const ThermoCurve c = build_curve(rho, initial, ctx);
    o.body = {{"initial_curve", curve_json(c)}, {"concave", is_concave(c)}};
    if (!is_concave(c)) o.violations.push_back("concave");
    curve_rows(csv, "initial", c);
    o.csv = csv.str();
    return o;
  }
  const EnergySpectrum final = final_spectrum(doc);
  const DiagState sigma = final_state(doc);
  const WorkShiftForm shift =
      doc.shift ? document_shift(doc)
                : WorkShiftForm{std::vector<double>(initial.size(), 0.0), std::vector<double>(final.size(), 0.0)};
  const ShiftFeasibility f = analyze_shift(rho, initial, sigma, final, shift, ctx);
  o.body = {{"initial_curve", curve_json(f.initial_curve)},
            {"final_curve", curve_json(f.final_curve)},
            {"shifted", doc.shift.has_value()},
            {"partition_functions_match", f.partition_functions_match},
            {"dominates", f.dominates},
            {"feasible", f.feasible}};
  if (!f.partition_functions_match) o.violations.push_back("partition_functions_match");
  if (!f.dominates) o.violations.push_back("dominates");
  curve_rows(csv, "initial", f.initial_curve);
  curve_rows(csv, "final", f.final_curve);
  o.csv = csv.str();
  return o;
}

FeasibilityProblem feasibility_problem(const ProblemDocument& doc) {
  std::optional<WorkShiftForm> shift;
  if (doc.shift) shift = document_shift(doc);
  return FeasibilityProblem{document_context(doc), initial_spectrum(doc), initial_state(doc),
                            final_spectrum(doc),   final_state(doc),     document_grid(doc),
                            doc.work_marginal,     shift};
}

const char* status_name(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::feasible:
      return "feasible";
    case FeasibilityStatus::optimal:
      return "optimal";
    case FeasibilityStatus::infeasible:
      break;
  }
  return "infeasible";
}

json solution_json(const LPSolution& sol) {
  json out = {{"status", status_name(sol.status)},
              {"free_energy_bound", sol.free_energy_bound},
              {"max_gibbs_deviation", sol.max_gibbs_deviation},
              {"max_row_deviation", sol.max_row_deviation},
              {"max_marginal_deviation", sol.max_marginal_deviation}};
  if (sol.kernel) out["kernel"] = kernel_json(*sol.kernel);
  if (!sol.certificate.empty()) out["certificate"] = sol.certificate;
  if (!sol.warning.empty()) out["warning"] = sol.warning;
  return out;
}

Outcome cmd_feasible(const ProblemDocument& doc) {
  const LPSolution sol = feasible_lp(feasibility_problem(doc));
  Outcome o;
  o.body = solution_json(sol);
  if (sol.status != FeasibilityStatus::feasible) o.violations.push_back("transition_infeasible");
  o.csv = sol.kernel ? kernel_csv(*sol.kernel) : Csv({"s", "s_prime", "w", "p"}).str();
  return o;
}

Outcome cmd_optimal_work(const ProblemDocument& doc) {
  const LPSolution sol = optimal_expected_work(feasibility_problem(doc));
  Outcome o;
  o.body = solution_json(sol);
  if (sol.status == FeasibilityStatus::optimal) {
    o.body["mean_work"] = sol.objective;
    o.body["gap"] = sol.gap;
    if (sol.gap < -1e-9) o.violations.push_back("free_energy_bound");
  } else {
    o.violations.push_back("transition_infeasible");
  }
  o.csv = sol.kernel ? kernel_csv(*sol.kernel) : Csv({"s", "s_prime", "w", "p"}).str();
  return o;
}

json landauer_point_json(const LandauerPoint& p) {
  return {{"w0", p.w0}, {"w1", p.w1}, {"mean_work", p.mean_work}, {"mean_cost", p.mean_cost}};
}

Outcome cmd_landauer(double epsilon, const ThermalContext& ctx, bool sweep, double tol) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ArgumentError("epsilon must lie in [0, 1)");
  const double t = ctx.temperature();
  // Least-fluctuating protocol: equal work on both successful branches, and on both failures.
  LandauerSpec sym;
  sym.epsilon = epsilon;
  sym.w0 = sym.w1 = t * std::log(1.0 / (2.0 * (1.0 - epsilon)));
  const auto failure = landauer_failure_work(epsilon, ctx);
  if (failure) sym.wbar0 = sym.wbar1 = *failure;
  const LandauerConstraintCheck check = check_landauer(sym, ctx, tol);

  Outcome o;
  o.body = {{"epsilon", epsilon},
            {"temperature", t},
            {"symmetric", {{"w0", sym.w0},
                           {"w1", sym.w1},
                           {"mean_work", landauer_mean_work(sym)},
                           {"success_residual", check.success_residual},
                           {"failure_residual", check.failure_residual}}},
            {"failure_work", failure ? json(*failure) : json(nullptr)}};
  if (!check.pass) o.violations.push_back("second_law_equality");
  Csv csv({"w0", "w1", "mean_work", "mean_cost"});
  if (sweep) {
    const LandauerCurve curve = landauer_tradeoff(epsilon, ctx, landauer_sweep_grid(epsilon, ctx));
    json points = json::array();
    for (const auto& p : curve.points) {
      if (!p.feasible) continue;
      points.push_back(landauer_point_json(p));
      csv.cell(p.w0).cell(p.w1).cell(p.mean_work).cell(p.mean_cost).end();
    }
    o.body["points"] = points;
    o.body["domain_negative"] = curve.domain_negative;
    if (curve.optimum) {
      o.body["optimum"] = landauer_point_json(curve.points[*curve.optimum]);
    } else {
      o.violations.push_back("optimum");
    }
    if (epsilon == 0.0 && !curve.domain_negative) o.violations.push_back("domain_negative");
  } else {
    csv.cell(sym.w0).cell(sym.w1).cell(landauer_mean_work(sym)).cell(-landauer_mean_work(sym)).end();
  }
  o.csv = csv.str();
  return o;
}

Outcome cmd_quantum(const QuantumSpec& spec, std::uint64_t seed) {
  Outcome o;
  json records = json::array();
  Csv csv({"seed", "gibbs_stochastic", "second_law", "jarzynski", "cq_second_law", "cq_jarzynski", "crooks",
           "tpm_row", "tpm_column", "tpm_jarzynski", "unitality", "purity", "integration_mismatch"});
  for (std::size_t i = 0; i < spec.instances; ++i) {
    const std::uint64_t s = seed + i;
    const QuantumRecord r = evaluate_quantum_instance(make_quantum_instance(s, spec.bath_dim, spec.ladder));
    const IntegrationRecord g = evaluate_integration(s, spec.bath_dim, spec.ladder);
    json failed = json::array();
    for (const auto& v : quantum_violations(r)) failed.push_back(v);
    for (const auto& v : integration_violations(g)) failed.push_back(v);
    for (const auto& v : failed) o.violations.push_back("seed " + std::to_string(s) + ": " + v.get<std::string>());
    records.push_back({{"seed", s},
                       {"guard_band", r.guard_band},
                       {"unitarity", r.unitarity},
                       {"covariance", r.covariance},
                       {"energy_bookkeeping", r.energy_bookkeeping},
                       {"gibbs_stochastic", r.gibbs_stochastic},
                       {"second_law", r.second_law},
                       {"jarzynski", r.jarzynski},
                       {"cq_second_law", r.cq_second_law},
                       {"cq_jarzynski", r.cq_jarzynski},
                       {"crooks", r.crooks},
                       {"crooks_inputs", r.crooks_inputs},
                       {"tpm_row", r.tpm_row},
                       {"tpm_column", r.tpm_column},
                       {"tpm_jarzynski", r.tpm_jarzynski},
                       {"unitality", r.unitality},
                       {"purity", r.purity},
                       {"induced_gibbs_deviation", g.induced_gibbs_deviation},
                       {"induced_row_deviation", g.induced_row_deviation},
                       {"integration_mismatch", g.value_mismatch},
                       {"failed", failed}});
    csv.cell(s).cell(r.gibbs_stochastic).cell(r.second_law).cell(r.jarzynski).cell(r.cq_second_law)
        .cell(r.cq_jarzynski).cell(r.crooks).cell(r.tpm_row).cell(r.tpm_column).cell(r.tpm_jarzynski)
        .cell(r.unitality).cell(r.purity).cell(g.value_mismatch).end();
  }
  o.body = {{"bath_dim", spec.bath_dim}, {"ladder", spec.ladder}, {"instances", records}};
  o.csv = csv.str();
  return o;
}

// Qubit curves: with no work the two curves cross; free-energy shifts straighten both into one line.
Outcome cmd_demo(const ThermalContext& ctx) {
  Outcome o;
  const EnergySpectrum h = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  const DiagState rho({0.5, 0.5});
  const DiagState sigma({0.9, 0.1});
  const WorkShiftForm none{{0.0, 0.0}, {0.0, 0.0}};
  const ShiftFeasibility plain = analyze_shift(rho, h, sigma, h, none, ctx);
  const auto straighten = [&](const DiagState& p) {
    std::vector<double> shift;
    for (std::size_t s = 0; s < p.size(); ++s) shift.push_back(-h.energy(s) - ctx.temperature() * std::log(p[s]));
    return shift;
  };
  const WorkShiftForm reversible{straighten(rho), straighten(sigma)};
  const ShiftFeasibility shifted = analyze_shift(rho, h, sigma, h, reversible, ctx);
  double mean_work = 0.0;
  for (std::size_t s = 0; s < 2; ++s) mean_work -= rho[s] * reversible.gamma[s];
  for (std::size_t s = 0; s < 2; ++s) mean_work += sigma[s] * reversible.alpha[s];
  const double delta_f = free_energy(h, ctx, rho) - free_energy(h, ctx, sigma);

  Csv csv({"curve", "x", "y"});
  curve_rows(csv, "no_work_initial", plain.initial_curve);
  curve_rows(csv, "no_work_final", plain.final_curve);
  curve_rows(csv, "reversible_initial", shifted.initial_curve);
  curve_rows(csv, "reversible_final", shifted.final_curve);

  json erasure = json::array();
  for (double eps : {0.1, 1e-3, 1e-6}) {
    const double failure = *landauer_failure_work(eps, ctx);
    const double expected = ctx.temperature() * std::log(1.0 / (2.0 * eps));
    erasure.push_back({{"epsilon", eps}, {"failure_work", failure}});
    if (std::abs(failure - expected) > 1e-10) o.violations.push_back("failure_work");
  }
  const LandauerCurve perfect = landauer_tradeoff(0.0, ctx, landauer_sweep_grid(0.0, ctx));
  if (!perfect.optimum) throw ConvergenceError("erasure sweep produced no feasible point");
  const LandauerPoint& best = perfect.points[*perfect.optimum];

  o.body = {{"curves", {{"no_work", {{"initial", curve_json(plain.initial_curve)},
                                      {"final", curve_json(plain.final_curve)},
                                      {"feasible", plain.feasible}}},
                        {"reversible", {{"initial", curve_json(shifted.initial_curve)},
                                        {"final", curve_json(shifted.final_curve)},
                                        {"feasible", shifted.feasible},
                                        {"mean_work", mean_work},
                                        {"free_energy_difference", delta_f}}}}},
            {"erasure", {{"optimum", landauer_point_json(best)},
                         {"landauer_cost", ctx.temperature() * std::log(2.0)},
                         {"domain_negative", perfect.domain_negative},
                         {"failure_branch", erasure}}}};
  if (plain.feasible) o.violations.push_back("no_work_curves_should_cross");
  if (!shifted.feasible) o.violations.push_back("reversible_shift");
  if (std::abs(mean_work - delta_f) > 1e-10) o.violations.push_back("reversible_mean_work");
  if (!perfect.domain_negative) o.violations.push_back("domain_negative");
  o.csv = csv.str();
  return o;
}

ProblemDocument with_overrides(ProblemDocument doc, const CommandOptions& opt) {
  if (opt.beta) doc.beta = *opt.beta;
  if (opt.tol) doc.tol = *opt.tol;
  if (opt.seed) doc.seed = *opt.seed;
  if (opt.samples) doc.samples = *opt.samples;
  return doc;
}

double positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(what) + " must be positive");
  return v;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"validate", "backward", "realize",      "identities",
                                              "sample",   "curve",    "feasible",     "optimal-work",
                                              "landauer", "quantum",  "demo"};
  return names;
}

bool needs_document(const std::string& name) { return name != "landauer" && name != "quantum" && name != "demo"; }

CommandResult run_subcommand(const std::string& name, const CommandOptions& options,
                             const std::optional<ProblemDocument>& document) {
  CommandResult result;
  const auto& names = subcommand_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    result.error = "unknown subcommand '" + name + "'";
    return result;
  }
  if (needs_document(name) && !document) {
    result.error = name + " needs a problem document";
    return result;
  }
  try {
    if (options.samples && *options.samples <= 0) throw ArgumentError("--samples must be positive");
    if (options.tol) positive(*options.tol, "--tol");
    if (options.beta) positive(*options.beta, "--beta");
    std::optional<ProblemDocument> doc;
    if (document) doc = with_overrides(*document, options);
    const double beta = doc ? doc->beta : options.beta.value_or(1.0);
    const double tol = doc ? doc->tol : options.tol.value_or(1e-10);
    const std::uint64_t seed = doc ? doc->seed : options.seed.value_or(0);

    static const std::map<std::string, std::function<Outcome(const ProblemDocument&)>> doc_commands{
        {"validate", cmd_validate}, {"backward", cmd_backward},         {"realize", cmd_realize},
        {"identities", cmd_identities}, {"sample", cmd_sample},         {"curve", cmd_curve},
        {"feasible", cmd_feasible}, {"optimal-work", cmd_optimal_work},
    };
    Outcome o;
    if (auto it = doc_commands.find(name); it != doc_commands.end()) {
      o = it->second(*doc);
    } else if (name == "landauer") {
      o = cmd_landauer(options.epsilon.value_or(0.0), ThermalContext(beta), options.sweep, tol);
    } else if (name == "quantum") {
      o = cmd_quantum(doc && doc->quantum ? *doc->quantum : QuantumSpec{}, seed);
    } else {
      o = cmd_demo(ThermalContext(beta));
    }
    result.report.command = name;
    if (document) result.report.input_digest = fnv1a_hex(serialize_problem(*document));
    result.report.pass = o.violations.empty();
    result.report.body = std::move(o.body);
    result.report.body["violations"] = o.violations;
    if (options.timestamp) result.report.timestamp = timestamp_now();
    result.csv = std::move(o.csv);
    result.exit_code = result.report.pass ? kExitPass : kExitViolation;
  } catch (const std::exception& e) {
    result = CommandResult{};
    result.error = e.what();
  }
  return result;
}

CommandResult run_subcommand_text(const std::string& name, const CommandOptions& options,
                                  const std::optional<std::string>& document_text) {
  std::optional<ProblemDocument> doc;
  if (document_text) {
    try {
      doc = parse_problem(*document_text);
    } catch (const ParseError& e) {
      CommandResult r;
      r.error = e.what();
      return r;
    }
  }
  return run_subcommand(name, options, doc);
}

}  // namespace fluctwork
