#pragma once

#include <stdexcept>
#include <string>

namespace floquet {

enum class ErrorCode {
  invalid_argument = 1,
  numerical_domain = 2,
  integration = 3,
  io = 4,
  regime_mismatch = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class NumericalDomainError : public Error {
 public:
  explicit NumericalDomainError(const std::string& what) : Error(ErrorCode::numerical_domain, what) {}
};

// Raised when the ODE integrator cannot meet its contract. Carries the error
// estimate that was achieved at the point of failure.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double achieved_error)
      : Error(ErrorCode::integration, what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

class RegimeMismatch : public Error {
 public:
  RegimeMismatch(const std::string& what, double linear_residual, double quadratic_residual)
      : Error(ErrorCode::regime_mismatch, what),
        linear_residual_(linear_residual),
        quadratic_residual_(quadratic_residual) {}
  double linear_residual() const noexcept { return linear_residual_; }
  double quadratic_residual() const noexcept { return quadratic_residual_; }

 private:
  double linear_residual_;
  double quadratic_residual_;
};

}  // namespace floquet
