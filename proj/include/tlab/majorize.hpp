#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tlab/rearrange.hpp"

namespace tlab {

/// Partial-sum witness for y < x.
struct MajorizationCertificate {
  /// slacks[k] = sum_{i<=k} x*_i - sum_{i<=k} y*_i; the last entry is sum x - sum y.
  std::vector<double> slacks;
  double total_residual = 0.0;  ///< |sum x - sum y|
  bool holds = false;

  double min_slack() const;
  /// First prefix whose slack is below -tol, or -1.
  long first_violation(double tol) const;
};

/// 1e-9 (1 + max|x|): the comparison tolerance used when callers have no better one.
double default_tolerance(std::span<const double> x);

/// Certificate for y < x (x majorizes y). Sums are compensated; tol is used
/// only in the final comparison.
MajorizationCertificate majorizes(std::span<const double> x, std::span<const double> y, double tol);

/// diag(A) < lambda. Diagonal imaginary parts above tol raise InputError.
MajorizationCertificate schur_check(const ComplexMatrix& a, const Spectrum& s, double tol);

/// y in co(Sigma x), decided through majorization.
bool rado_membership(std::span<const double> y, std::span<const double> x, double tol);

/// max over phi of sum phi(y_i) - sum phi(x_i); <= 0 whenever y < x.
double convex_function_test(std::span<const double> x, std::span<const double> y,
                            const std::vector<std::function<double(double)>>& phis);

/// Real symmetric matrix with spectrum lambda and diagonal d, built from diag(lambda)
/// by plane rotations that each pin one diagonal entry at its target.
/// PreconditionError (carrying the violated prefix) when d is not majorized by lambda.
ComplexMatrix horn_construct(std::span<const double> lambda, std::span<const double> d, double tol);

/// n points of co(Sigma lambda): convex combinations, with normalized-exponential
/// weights, of min(n_perm, (m+1)!) random permutations of lambda. Deterministic per seed.
std::vector<std::vector<double>> sample_hull(std::span<const double> lambda, int n, std::uint64_t seed,
                                             int n_perm = 8);

/// Largest number of pieces a common refinement may have.
inline constexpr long kMaxRefinement = 1'000'000;

/// Continuous majorization g < f of step functions, checked on a common
/// refinement. Slacks are in integral units: int_0^s f* - int_0^s g* at each breakpoint.
MajorizationCertificate step_majorizes(const StepFunction& f, const StepFunction& g, double tol);

struct CumulativeCurve {
  std::vector<double> values;  ///< int_0^s f* at each grid point
  double tolerance = 0.0;      ///< 0 for exact step evaluation
};

/// s_grid must be sorted and inside (0, 1].
CumulativeCurve cumulative_rearranged(const StepFunction& f, std::span<const double> s_grid);
CumulativeCurve cumulative_rearranged(const Rearrangement& f, std::span<const double> s_grid);

/// "prefix,slack" rows followed by a "holds,<true|false>" footer.
void write_certificate_csv(std::ostream& os, const MajorizationCertificate& c);

}  // namespace tlab
