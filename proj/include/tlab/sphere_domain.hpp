#pragma once

// Symbols on CP(1) in the (z, theta) chart and quadrature for the
// normalized invariant measure  dmu = dz dtheta / (2 pi)  (total mass 1).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

using SymbolFn = std::function<double(double z, double theta)>;

/// A real function on the sphere, z in [0,1], theta in [0, 2pi).
struct SphereSymbol {
  std::string name;
  SymbolFn evaluator;
  double sup_bound = 0.0;   ///< bound on |f|
  bool zonal = false;       ///< independent of theta
  std::optional<int> theta_bandwidth;  ///< max Fourier mode in theta, when known
  double min_value = 0.0;   ///< essential infimum (exact for the battery, sampled otherwise)
  double max_value = 0.0;   ///< essential supremum

  double operator()(double z, double theta) const { return evaluator(z, theta); }
};

/// Builds a symbol and spot-checks its invariants on a grid.
///
/// When `range` is absent the min/max are estimated on a 257 x 256 grid.
/// Throws ArgumentError if the evaluator is non-finite, exceeds `sup_bound`,
/// or depends on theta while declared zonal.
SphereSymbol make_symbol(std::string name, SymbolFn evaluator, double sup_bound, bool zonal,
                         std::optional<int> theta_bandwidth = std::nullopt,
                         std::optional<std::pair<double, double>> range = std::nullopt);

/// Zonal polynomial f(z) = sum_i coeffs[i] z^i.
SphereSymbol zonal_polynomial(std::span<const double> coeffs, std::string name = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

/// Product rule: Gauss-Legendre in psi (z = sin^2 psi) times uniform trapezoid in theta.
class QuadratureRule {
 public:
  /// Default rule for rank-m assembly: 2m+16 psi nodes, 4m+8 theta nodes,
  /// validated against beta integrals up to degree 2m+4.
  static QuadratureRule for_rank(int m);

  /// Throws ConfigurationError when the beta-integral self-test fails.
  QuadratureRule(int psi_count, int theta_count, int exactness_degree);

  int psi_count() const { return static_cast<int>(psi_.size()); }
  int theta_count() const { return theta_count_; }
  int exactness_degree() const { return exactness_degree_; }

  std::span<const double> psi_nodes() const { return psi_; }
  std::span<const double> z_nodes() const { return z_; }
  /// dz-weights (Jacobian sin 2psi folded in), normalized to sum 1.
  std::span<const double> z_weights() const { return w_; }
  /// Sum of z_weights in node order; used as the exact mass normalizer.
  double mass() const { return mass_; }
  double theta(int t) const { return kTwoPi * t / theta_count_; }

 private:
  std::vector<double> psi_;
  std::vector<double> z_;
  std::vector<double> w_;
  double mass_ = 1.0;
  int theta_count_ = 0;
  int exactness_degree_ = 0;
};

/// Beta integral  int_0^1 z^a (1-z)^b dz = a! b! / (a+b+1)!.
double beta_integral(int a, int b);

/// Quadrature approximation of  int f dmu.
double integrate(const SphereSymbol& symbol, const QuadratureRule& rule);

/// Same, for an arbitrary (z, theta) integrand.
double integrate(const SymbolFn& fn, const QuadratureRule& rule);

/// P(f)(z) = (1/2pi) int f(z, theta) dtheta by the rule's theta trapezoid.
std::vector<double> project_theta_average(const SphereSymbol& symbol,
                                          std::span<const double> z_grid,
                                          const QuadratureRule& rule);

/// The named test battery: one, x3, x1, x3sq, x1px3, x3cpx1x2.
std::vector<SphereSymbol> symbol_battery();

/// Battery lookup by name; nullopt if unknown.
std::optional<SphereSymbol> battery_symbol(const std::string& name);

}  // namespace tlab
