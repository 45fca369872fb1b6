#pragma once

#include <stdexcept>
#include <string>

namespace sdpkit {

enum class ErrorKind {
  NumericalTrouble,
  NotPositiveDefinite,
  NotPsd,
  UnsupportedSize,
  LeadingBlockNotPd,
  InfeasibleLinearSystem,
  DependentConstraintMatrices,
  VariableCountMismatch,
  InfeasibleArgument,
  DegenerateInput,
  FactorizationFailure,
  NotConvexified,
  NotPositiveOnNullspace,
  NotPsdOnNullspace,
  InfeasibleModel,
  DomainError,
  DimensionMismatch,
  Infeasible,
  InvalidArgument,
  Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the text readers; line is 1-based, 0 when the whole input is at fault.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& reason)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}
  int line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  int line_;
  std::string reason_;
};

}  // namespace sdpkit
