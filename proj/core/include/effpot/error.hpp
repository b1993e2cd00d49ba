#pragma once

#include <stdexcept>
#include <string>

namespace effpot {

enum class ErrorKind {
  NonSymmetric,
  Reducible,
  BadLambda,
  DepthMismatch,
  DepthTooLarge,
  MissingEntry,
  NonFinite,
  NoConvergence,
  WrongC,
  NotStronglyConnected,
  InsufficientRows,
  Infeasible,
  Unbounded,
  ParseError,
  ValidationError,
  AssertionFailure,
};

const char* to_string(ErrorKind kind);

/// All failures in the library are reported through this exception.
/// `kind` drives the CLI exit code: NoConvergence maps to exit code 2,
/// everything else to exit code 1.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace effpot
