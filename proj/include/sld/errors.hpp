#pragma once

#include <stdexcept>
#include <string>

namespace sld {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent user-supplied configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Base class for failures detected during numerical evaluation.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

/// Exact division by zero in a closed-form expression.
class SingularityError : public NumericError {
 public:
  explicit SingularityError(const std::string& msg) : NumericError(msg) {}
};

/// Evaluation landed exactly on a pole of a response function.
class PoleError : public NumericError {
 public:
  explicit PoleError(const std::string& msg) : NumericError(msg) {}
};

/// A matrix failed a structural check (unit determinant, reciprocal
/// eigenvalue pairing, invertible lower-right block).
class DegeneracyError : public NumericError {
 public:
  DegeneracyError(const std::string& msg, double residual)
      : NumericError(msg + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Band tracking could not connect adjacent grid points.
class UnwrapError : public NumericError {
 public:
  explicit UnwrapError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace sld
