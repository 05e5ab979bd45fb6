#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

enum class ErrorCode {
  DescriptorMismatch,
  Resource,
  Precondition,
  Convergence,
  Contract,
  UnsupportedKind,
  Construction,
  Resolution,
  InternalConsistency,
  Schema,
};

const char* to_string(ErrorCode code);

/// Base error for every failure raised by the library. The code lets the CLI
/// map failures onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an iterative eigensolver runs out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorCode::Convergence, what + " (last residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DescriptorMismatch: return "descriptor mismatch";
    case ErrorCode::Resource: return "resource error";
    case ErrorCode::Precondition: return "precondition error";
    case ErrorCode::Convergence: return "convergence error";
    case ErrorCode::Contract: return "contract error";
    case ErrorCode::UnsupportedKind: return "unsupported kind";
    case ErrorCode::Construction: return "construction error";
    case ErrorCode::Resolution: return "resolution error";
    case ErrorCode::InternalConsistency: return "internal consistency error";
    case ErrorCode::Schema: return "schema error";
  }
  return "error";
}

}  // namespace dlab
