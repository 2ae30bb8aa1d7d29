#pragma once

#include <stdexcept>
#include <string>

namespace fluctwork {

// Base for every error raised by the library. The CLI maps these to exit 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix sizes or level counts.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid thermal context (beta <= 0 or non-finite).
class ContextError : public Error {
 public:
  using Error::Error;
};

// Malformed argument (even moment order, n <= 0, negative probability, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Energies or work values that are not integer multiples of a lattice spacing.
class CommensurabilityError : public Error {
 public:
  using Error::Error;
};

// Bath window too small to realize a kernel.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// An operation's stated precondition does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A channel produced coherences between energy levels where a diagonal output was required.
class NotQuasiClassicalError : public Error {
 public:
  using Error::Error;
};

// Structured-document failures; `where` is a JSON-pointer style path to the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace fluctwork
