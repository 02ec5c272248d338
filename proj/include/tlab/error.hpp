#pragma once

#include <stdexcept>
#include <string>

namespace tlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: out-of-range index, empty grid, length mismatch, unknown name.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A symbol evaluator returned a non-finite value.
class DomainEvaluationError : public Error {
 public:
  DomainEvaluationError(const std::string& what, double z, double theta)
      : Error(what), z_(z), theta_(theta) {}
  double z() const { return z_; }
  double theta() const { return theta_; }

 private:
  double z_;
  double theta_;
};

/// Quadrature or solver configuration cannot meet its accuracy contract.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural requirement (e.g. matrix not Hermitian).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition fails (e.g. d not majorized by lambda).
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, long index = -1) : Error(what), index_(index) {}
  /// Offending prefix index, or -1 when not applicable.
  long index() const { return index_; }

 private:
  long index_;
};

/// Iterative numerics failed to converge.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const { return worst_residual_; }

 private:
  double worst_residual_;
};

}  // namespace tlab
