#include "effpot/error.hpp"

namespace effpot {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::BadLambda: return "BadLambda";
    case ErrorKind::DepthMismatch: return "DepthMismatch";
    case ErrorKind::DepthTooLarge: return "DepthTooLarge";
    case ErrorKind::MissingEntry: return "MissingEntry";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::WrongC: return "WrongC";
    case ErrorKind::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorKind::InsufficientRows: return "InsufficientRows";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::AssertionFailure: return "AssertionFailure";
  }
  return "Unknown";
}

}  // namespace effpot
