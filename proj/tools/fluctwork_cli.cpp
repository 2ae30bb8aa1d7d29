// fluctwork: command-line front end for the thermal-operation toolkit.
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "fluctwork/commands.hpp"

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::optional<std::string> slurp(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fluctwork;
  CLI::App app{"Thermal operations with fluctuating work: validation, identities, feasibility, quantum checks."};
  app.set_version_flag("--version", kToolVersion);

  std::string command;
  std::string in_path;
  std::string out_path;
  CommandOptions opt;
  double beta = 0, tol = 0, epsilon = 0;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  bool no_timestamp = false;

  app.add_option("command", command, "one of: " + join(subcommand_names(), ", "))->required();
  app.add_option("--in", in_path, "problem document (JSON); '-' or omitted reads standard input");
  app.add_option("--out", out_path, "write the report here instead of standard output");
  auto* beta_opt = app.add_option("--beta", beta, "inverse temperature (overrides the document)");
  auto* tol_opt = app.add_option("--tol", tol, "identity tolerance");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* samples_opt = app.add_option("--samples", samples, "Monte Carlo sample count");
  auto* eps_opt = app.add_option("--epsilon", epsilon, "erasure failure probability");
  app.add_flag("--sweep", opt.sweep, "sweep the erasure tradeoff curve");
  app.add_flag("--csv", opt.csv, "emit plot data as CSV instead of the JSON report");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp so reports are byte-identical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitInputError;
  }

  if (*beta_opt) opt.beta = beta;
  if (*tol_opt) opt.tol = tol;
  if (*seed_opt) opt.seed = seed;
  if (*samples_opt) opt.samples = samples;
  if (*eps_opt) opt.epsilon = epsilon;
  opt.timestamp = !no_timestamp;

  const auto& names = subcommand_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    std::cerr << "usage error: unknown subcommand '" << command << "'\n" << app.help();
    return kExitInputError;
  }

  std::optional<std::string> text;
  if (!in_path.empty() || needs_document(command)) {
    text = slurp(in_path.empty() ? "-" : in_path);
    if (!text) {
      std::cerr << "error: cannot read " << in_path << "\n";
      return kExitInputError;
    }
  }

  const CommandResult result = run_subcommand_text(command, opt, text);
  if (result.exit_code == kExitInputError) {
    std::cerr << "error: " << result.error << "\n";
    return result.exit_code;
  }

  const std::string payload = opt.csv ? result.csv : render_report(result.report);
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << payload)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitInputError;
    }
  }
  if (result.exit_code == kExitViolation) {
    const auto& v = result.report.body["violations"];
    std::vector<std::string> failed(v.begin(), v.end());
    std::cerr << command << ": violated: " << join(failed, ", ") << "\n";
  }
  return result.exit_code;
}
