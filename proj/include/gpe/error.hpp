#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpe {

enum class ErrorKind {
  InvalidDomain,
  MeshMismatch,
  NearSingular,
  NegativePotential,
  NotNormalized,
  ShiftEqualsLambda,
  NonpositiveGamma,
  NoConvergence,
  MaxIterExceeded,
  InsufficientData,
  InvalidArgument,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gpe
