#include "fluctwork/document.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

#include "fluctwork/errors.hpp"
#include "fluctwork/gibbs_kernel.hpp"

namespace fluctwork {

namespace {

using json = nlohmann::json;

// Probabilities written by hand rarely sum to 1 to machine precision.
constexpr double kDocumentSumTolerance = 1e-9;

std::string key_path(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ParseError(key_path(path, key.c_str()), "unknown field");
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path.empty() ? "$" : path, "expected an object");
  return j;
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

const json* field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path, "number out of range");
  return v;
}

std::uint64_t unsigned_integer(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ParseError(path, "expected a non-negative integer");
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index_path(path, i)));
  return out;
}

void check_probabilities(const std::vector<double>& p, const std::string& path) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) throw ValidationError(index_path(path, i), "negative probability");
    total += p[i];
  }
  if (std::abs(total - 1.0) > kDocumentSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << total;
    throw ValidationError(path, msg.str());
  }
}

SideSpec parse_side(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, path, {"levels", "energies", "state"});
  SideSpec side;
  const json* levels = field(j, "levels");
  const json* energies = field(j, "energies");
  if ((levels != nullptr) == (energies != nullptr)) throw ParseError(path, "give exactly one of levels or energies");
  if (levels != nullptr) {
    const std::string lp = key_path(path, "levels");
    require_array(*levels, lp);
    for (std::size_t i = 0; i < levels->size(); ++i) {
      const std::string ip = index_path(lp, i);
      const json& level = require_object((*levels)[i], ip);
      allow_keys(level, ip, {"label", "energy"});
      const json* label = field(level, "label");
      const json* energy = field(level, "energy");
      if (label == nullptr) throw ParseError(key_path(ip, "label"), "missing");
      if (energy == nullptr) throw ParseError(key_path(ip, "energy"), "missing");
      side.levels.push_back({text(*label, key_path(ip, "label")), number(*energy, key_path(ip, "energy"))});
    }
  } else {
    const auto e = numbers(*energies, key_path(path, "energies"));
    for (std::size_t i = 0; i < e.size(); ++i) side.levels.push_back({std::to_string(i), e[i]});
  }
  if (side.levels.empty()) throw ValidationError(path, "no energy levels");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < side.levels.size(); ++i) {
    if (!seen.insert(side.levels[i].label).second)
      throw ValidationError(path, "duplicate label '" + side.levels[i].label + "'");
  }
  if (const json* state = field(j, "state")) {
    const std::string sp = key_path(path, "state");
    auto p = numbers(*state, sp);
    if (p.size() != side.levels.size())
      throw ValidationError(sp, "has " + std::to_string(p.size()) + " entries for " +
                                    std::to_string(side.levels.size()) + " levels");
    check_probabilities(p, sp);
    side.state = std::move(p);
  }
  return side;
}

std::map<std::string, std::size_t> label_index(const std::vector<EnergyLevel>& levels) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < levels.size(); ++i) out[levels[i].label] = i;
  return out;
}

std::vector<KernelRow> parse_kernel(const json& j, const ProblemDocument& doc) {
  const std::string path = "kernel";
  require_array(j, path);
  const auto from = label_index(doc.initial.levels);
  const auto to = label_index(doc.final ? doc.final->levels : doc.initial.levels);
  std::vector<KernelRow> rows;
  std::vector<double> sums(doc.initial.levels.size(), 0.0);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ip = index_path(path, i);
    const json& q = require_array(j[i], ip);
    if (q.size() != 4) throw ParseError(ip, "expected [s_label, s'_label, w, p]");
    KernelRow row{text(q[0], index_path(ip, 0)), text(q[1], index_path(ip, 1)), number(q[2], index_path(ip, 2)),
                  number(q[3], index_path(ip, 3))};
    auto s = from.find(row.s);
    if (s == from.end()) throw ValidationError(index_path(ip, 0), "unknown initial label '" + row.s + "'");
    if (!to.contains(row.s_prime))
      throw ValidationError(index_path(ip, 1), "unknown final label '" + row.s_prime + "'");
    if (row.p < 0.0) throw ValidationError(index_path(ip, 3), "negative probability");
    if (doc.grid && !WorkGrid(*doc.grid).find(row.w))
      throw ValidationError(index_path(ip, 2), "work value not on the grid");
    sums[s->second] += row.p;
    rows.push_back(std::move(row));
  }
  for (std::size_t s = 0; s < sums.size(); ++s) {
    if (std::abs(sums[s] - 1.0) > kDocumentSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row for initial level '" << doc.initial.levels[s].label << "' sums to " << sums[s];
      throw ValidationError(path, msg.str());
    }
  }
  return rows;
}

json side_json(const SideSpec& side) {
  json levels = json::array();
  for (const auto& l : side.levels) levels.push_back({{"label", l.label}, {"energy", l.energy}});
  json out = {{"levels", levels}};
  if (side.state) out["state"] = *side.state;
  return out;
}

void format_double(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write_canonical(const json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map storage: keys already sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        write_canonical(value, depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; nested structures get one element per line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += flat ? ", " : ",\n";
        if (!flat) out += pad;
        write_canonical(j[i], depth + 1, out);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case json::value_t::number_float:
      format_double(j.get<double>(), out);
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

ProblemDocument parse_problem(std::string_view input) {
  json root;
  try {
    root = json::parse(input.begin(), input.end());
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("malformed JSON (byte ") + std::to_string(e.byte) + ")");
  }
  require_object(root, "");
  allow_keys(root, "", {"beta", "initial", "final", "grid", "kernel", "random_kernel", "shift", "work_marginal",
                        "bath", "quantum", "seed", "tol", "samples"});
  ProblemDocument doc;
  if (const json* beta = field(root, "beta")) {
    doc.beta = number(*beta, "beta");
    if (!(doc.beta > 0.0)) throw ValidationError("beta", "must be positive");
  }
  const json* initial = field(root, "initial");
  if (initial == nullptr) throw ParseError("initial", "missing");
  doc.initial = parse_side(*initial, "initial");
  if (const json* final = field(root, "final")) doc.final = parse_side(*final, "final");
  if (const json* grid = field(root, "grid")) {
    doc.grid = numbers(*grid, "grid");
    if (doc.grid->empty()) throw ValidationError("grid", "must be nonempty");
  }
  const json* kernel = field(root, "kernel");
  const json* random = field(root, "random_kernel");
  if (kernel && random) throw ParseError("random_kernel", "conflicts with explicit kernel entries");
  if (kernel) doc.kernel = parse_kernel(*kernel, doc);
  if (random) {
    require_object(*random, "random_kernel");
    allow_keys(*random, "random_kernel", {"seed"});
    const json* seed = field(*random, "seed");
    if (seed == nullptr) throw ParseError("random_kernel.seed", "missing");
    doc.random_kernel_seed = unsigned_integer(*seed, "random_kernel.seed");
    if (!doc.grid) throw ValidationError("random_kernel", "needs a work grid");
  }
  const std::size_t d = doc.initial.levels.size();
  const std::size_t dp = doc.final ? doc.final->levels.size() : d;
  if (const json* shift = field(root, "shift")) {
    require_object(*shift, "shift");
    allow_keys(*shift, "shift", {"gamma", "alpha"});
    const json* gamma = field(*shift, "gamma");
    const json* alpha = field(*shift, "alpha");
    if (!gamma || !alpha) throw ParseError("shift", "needs gamma and alpha");
    ShiftSpec spec{numbers(*gamma, "shift.gamma"), numbers(*alpha, "shift.alpha")};
    if (spec.gamma.size() != d) throw ValidationError("shift.gamma", "one entry per initial level");
    if (spec.alpha.size() != dp) throw ValidationError("shift.alpha", "one entry per final level");
    doc.shift = std::move(spec);
  }
  if (const json* marginal = field(root, "work_marginal")) {
    auto m = numbers(*marginal, "work_marginal");
    if (!doc.grid) throw ValidationError("work_marginal", "needs a work grid");
    if (m.size() != WorkGrid(*doc.grid).size()) throw ValidationError("work_marginal", "one entry per grid value");
    check_probabilities(m, "work_marginal");
    doc.work_marginal = std::move(m);
  }
  if (const json* bath = field(root, "bath")) {
    require_object(*bath, "bath");
    allow_keys(*bath, "bath", {"half_range", "denom_bits"});
    BathSpec spec;
    if (const json* m = field(*bath, "half_range"))
      spec.half_range = static_cast<int>(unsigned_integer(*m, "bath.half_range"));
    if (const json* b = field(*bath, "denom_bits"))
      spec.denom_bits = static_cast<int>(unsigned_integer(*b, "bath.denom_bits"));
    doc.bath = spec;
  }
  if (const json* quantum = field(root, "quantum")) {
    require_object(*quantum, "quantum");
    allow_keys(*quantum, "quantum", {"bath_dim", "ladder", "instances"});
    QuantumSpec spec;
    if (const json* b = field(*quantum, "bath_dim")) spec.bath_dim = unsigned_integer(*b, "quantum.bath_dim");
    if (const json* l = field(*quantum, "ladder")) spec.ladder = unsigned_integer(*l, "quantum.ladder");
    if (const json* n = field(*quantum, "instances")) spec.instances = unsigned_integer(*n, "quantum.instances");
    doc.quantum = spec;
  }
  if (const json* seed = field(root, "seed")) doc.seed = unsigned_integer(*seed, "seed");
  if (const json* tol = field(root, "tol")) {
    doc.tol = number(*tol, "tol");
    if (!(doc.tol > 0.0)) throw ValidationError("tol", "must be positive");
  }
  if (const json* samples = field(root, "samples")) {
    const auto n = unsigned_integer(*samples, "samples");
    if (n == 0) throw ValidationError("samples", "must be positive");
    doc.samples = static_cast<std::int64_t>(n);
  }
  return doc;
}

nlohmann::json to_json(const ProblemDocument& doc) {
  json out;
  out["beta"] = doc.beta;
  out["initial"] = side_json(doc.initial);
  if (doc.final) out["final"] = side_json(*doc.final);
  if (doc.grid) out["grid"] = *doc.grid;
  if (doc.kernel) {
    json rows = json::array();
    for (const auto& r : *doc.kernel) rows.push_back(json::array({r.s, r.s_prime, r.w, r.p}));
    out["kernel"] = rows;
  }
  if (doc.random_kernel_seed) out["random_kernel"] = {{"seed", *doc.random_kernel_seed}};
  if (doc.shift) out["shift"] = {{"gamma", doc.shift->gamma}, {"alpha", doc.shift->alpha}};
  if (doc.work_marginal) out["work_marginal"] = *doc.work_marginal;
  if (doc.bath) out["bath"] = {{"half_range", doc.bath->half_range}, {"denom_bits", doc.bath->denom_bits}};
  if (doc.quantum)
    out["quantum"] = {{"bath_dim", doc.quantum->bath_dim},
                      {"ladder", doc.quantum->ladder},
                      {"instances", doc.quantum->instances}};
  out["seed"] = doc.seed;
  out["tol"] = doc.tol;
  if (doc.samples) out["samples"] = *doc.samples;
  return out;
}

std::string serialize_problem(const ProblemDocument& doc) { return canonical_json(to_json(doc)); }

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  write_canonical(value, 0, out);
  out += "\n";
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ThermalContext document_context(const ProblemDocument& doc) { return ThermalContext(doc.beta); }

EnergySpectrum initial_spectrum(const ProblemDocument& doc) { return EnergySpectrum(doc.initial.levels); }

EnergySpectrum final_spectrum(const ProblemDocument& doc) {
  return EnergySpectrum(doc.final ? doc.final->levels : doc.initial.levels);
}

DiagState initial_state(const ProblemDocument& doc) {
  if (!doc.initial.state) throw ValidationError("initial.state", "required by this command");
  return DiagState(*doc.initial.state, true);
}

DiagState final_state(const ProblemDocument& doc) {
  if (!doc.final || !doc.final->state) throw ValidationError("final.state", "required by this command");
  return DiagState(*doc.final->state, true);
}

WorkGrid document_grid(const ProblemDocument& doc) {
  if (doc.grid) return WorkGrid(*doc.grid);
  if (doc.kernel && !doc.kernel->empty()) {
    std::vector<double> w;
    for (const auto& r : *doc.kernel) w.push_back(r.w);
    return WorkGrid(std::move(w));
  }
  throw ValidationError("grid", "required by this command");
}

WorkShiftForm document_shift(const ProblemDocument& doc) {
  if (!doc.shift) throw ValidationError("shift", "required by this command");
  return WorkShiftForm{doc.shift->gamma, doc.shift->alpha};
}

WorkKernel document_kernel(const ProblemDocument& doc) {
  const EnergySpectrum initial = initial_spectrum(doc);
  const EnergySpectrum final = final_spectrum(doc);
  const WorkGrid grid = document_grid(doc);
  if (doc.kernel) {
    WorkKernel k(initial, final, grid);
    for (const auto& r : *doc.kernel) {
      const auto w = grid.find(r.w);
      if (!w) throw ValidationError("kernel", "work value not on the grid");
      k.add(initial.index_of(r.s), final.index_of(r.s_prime), *w, r.p);
    }
    return k;
  }
  if (doc.random_kernel_seed)
    return random_kernel(initial, final, grid, document_context(doc), *doc.random_kernel_seed);
  throw ValidationError("kernel", "required by this command (give kernel or random_kernel)");
}

std::string render_report(const ReportDocument& report) {
  json out;
  out["tool"] = kToolVersion;
  out["command"] = report.command;
  if (!report.input_digest.empty()) out["input_digest"] = report.input_digest;
  out["pass"] = report.pass;
  out["report"] = report.body;
  if (report.timestamp) out["timestamp"] = *report.timestamp;
  return canonical_json(out);
}

}  // namespace fluctwork
