#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fluctwork/majorize.hpp"
#include "fluctwork/thermo_core.hpp"
#include "fluctwork/work_kernel.hpp"

namespace fluctwork {

inline constexpr const char* kToolVersion = "fluctwork 0.1.0";

struct SideSpec {
  std::vector<EnergyLevel> levels;
  std::optional<std::vector<double>> state;

  friend bool operator==(const SideSpec&, const SideSpec&) = default;
};

// One [s_label, s'_label, w, p] quadruple.
struct KernelRow {
  std::string s;
  std::string s_prime;
  double w = 0.0;
  double p = 0.0;

  friend bool operator==(const KernelRow&, const KernelRow&) = default;
};

struct ShiftSpec {
  std::vector<double> gamma;
  std::vector<double> alpha;

  friend bool operator==(const ShiftSpec&, const ShiftSpec&) = default;
};

struct BathSpec {
  int half_range = 20;
  int denom_bits = 8;

  friend bool operator==(const BathSpec&, const BathSpec&) = default;
};

struct QuantumSpec {
  std::size_t bath_dim = 2;
  std::size_t ladder = 16;
  std::size_t instances = 1;

  friend bool operator==(const QuantumSpec&, const QuantumSpec&) = default;
};

struct ProblemDocument {
  double beta = 1.0;
  SideSpec initial;
  std::optional<SideSpec> final;  // absent: same levels as initial
  std::optional<std::vector<double>> grid;
  std::optional<std::vector<KernelRow>> kernel;
  std::optional<std::uint64_t> random_kernel_seed;
  std::optional<ShiftSpec> shift;
  std::optional<std::vector<double>> work_marginal;
  std::optional<BathSpec> bath;
  std::optional<QuantumSpec> quantum;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::optional<std::int64_t> samples;

  friend bool operator==(const ProblemDocument&, const ProblemDocument&) = default;
};

// Throws ParseError (with a path such as "initial.levels[1].energy") or ValidationError.
ProblemDocument parse_problem(std::string_view text);
nlohmann::json to_json(const ProblemDocument& doc);
std::string serialize_problem(const ProblemDocument& doc);

// Sorted keys, two-space indent, doubles with 17 significant digits, NaN/inf as null.
std::string canonical_json(const nlohmann::json& value);
std::string fnv1a_hex(std::string_view bytes);

ThermalContext document_context(const ProblemDocument& doc);
EnergySpectrum initial_spectrum(const ProblemDocument& doc);
EnergySpectrum final_spectrum(const ProblemDocument& doc);
DiagState initial_state(const ProblemDocument& doc);  // ValidationError when absent
DiagState final_state(const ProblemDocument& doc);
WorkGrid document_grid(const ProblemDocument& doc);
WorkShiftForm document_shift(const ProblemDocument& doc);
// Explicit entries win; otherwise random_kernel seed over the grid.
WorkKernel document_kernel(const ProblemDocument& doc);

struct ReportDocument {
  std::string command;
  std::string input_digest;  // empty when the command took no document
  bool pass = false;
  nlohmann::json body = nlohmann::json::object();
  std::optional<std::string> timestamp;
};

std::string render_report(const ReportDocument& report);

}  // namespace fluctwork
