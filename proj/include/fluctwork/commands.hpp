#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluctwork/document.hpp"

namespace fluctwork {

// Flags override the matching document fields.
struct CommandOptions {
  std::optional<double> beta;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<double> epsilon;
  bool sweep = false;
  bool csv = false;
  bool timestamp = true;
};

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitInputError = 2 };

struct CommandResult {
  int exit_code = kExitInputError;
  ReportDocument report;
  std::string csv;    // filled for commands with tabular output
  std::string error;  // input errors: the message, report left empty
};

const std::vector<std::string>& subcommand_names();
bool needs_document(const std::string& name);

// Never throws for library errors: they come back as exit code 2 with `error` set.
CommandResult run_subcommand(const std::string& name, const CommandOptions& options,
                             const std::optional<ProblemDocument>& document);

// Parses first; the digest covers the canonical form, so whitespace and key order do not matter.
CommandResult run_subcommand_text(const std::string& name, const CommandOptions& options,
                                  const std::optional<std::string>& document_text);

}  // namespace fluctwork
