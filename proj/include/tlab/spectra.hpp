#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tlab/toeplitz.hpp"

namespace tlab {

/// Eigenvalues of an (m+1) x (m+1) Hermitian matrix, sorted non-increasing.
struct Spectrum {
  int order = 0;
  std::vector<double> values;
};

/// Piecewise-constant function on [0,1): values[k] on [k/(m+1), (k+1)/(m+1)).
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(std::vector<double> values);

  int rank() const { return static_cast<int>(values_.size()) - 1; }
  int pieces() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }

  /// Value on the piece containing x; x = 1 maps to the last piece.
  double operator()(double x) const;
  double l2_norm_squared() const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<double> values_;
};

/// Default residual tolerance for eigenvalues().
inline constexpr double kEigenTolerance = 1e-10;

/// Hermitian eigenvalues. Rejects non-Hermitian input (InputError); throws
/// NumericalError when the solver fails or a residual |Av - lv| > tol |A|.
Spectrum eigenvalues(const ComplexMatrix& a, double tol = kEigenTolerance);
Spectrum eigenvalues(const ToeplitzMatrix& a, double tol = kEigenTolerance);

/// Lambda^m: the spectrum laid out on the uniform (m+1)-piece partition.
StepFunction lambda_step(const Spectrum& s);

/// |(1/(m+1)) sum_k phi(lambda_k) - int phi(f) dmu|.
double szego_error(const Spectrum& s, const SphereSymbol& symbol, const std::function<double(double)>& phi,
                   const QuadratureRule& rule);

/// CSV with header "m,k,lambda".
void write_spectra_csv(std::ostream& os, const std::vector<Spectrum>& spectra);

struct SzegoRow {
  int m = 0;
  std::string phi;
  double error = 0.0;
};
/// CSV with header "m,phi,error".
void write_szego_csv(std::ostream& os, const std::vector<SzegoRow>& rows);

}  // namespace tlab
