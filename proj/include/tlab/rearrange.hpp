#pragma once

// Distribution functions, decreasing rearrangements f*(s) = inf{t : d_f(t) < s}
// and the generalized inverse g(t) = inf{x : F(x) > t}.
//
// F_f(t) = mu{f < t} uses the strict inequality throughout, so profiles of
// finitely-valued sources are left-continuous at their atoms.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tlab/spectra.hpp"

namespace tlab {

inline constexpr int kDefaultThresholds = 4096;

struct DistributionProfile {
  std::vector<double> thresholds;     ///< sorted ascending
  std::vector<double> below_measure;  ///< F(t_i) = mu{f < t_i}
  double total_mass = 1.0;
  /// True when the thresholds are the exact atoms of a finitely-valued source;
  /// atom_mass[i] = mu{f = t_i}. Otherwise F is linear between thresholds.
  bool atomic = false;
  std::vector<double> atom_mass;

  /// F(t) for any real t.
  double below(double t) const;
  /// d_f(t) = total_mass - F(t).
  double tail(double t) const { return total_mass - below(t); }
};

/// A decreasing rearrangement on (0,1).
class Rearrangement {
 public:
  /// Piecewise constant: values (strictly decreasing) held on consecutive cells of the given masses.
  static Rearrangement steps(std::vector<double> values, std::vector<double> masses, std::string source);
  /// Arbitrary non-increasing evaluator.
  static Rearrangement function(std::function<double(double)> evaluator, std::string source);

  double operator()(double s) const;
  const std::string& source() const { return source_; }
  bool is_step() const { return !step_values_.empty(); }
  const std::vector<double>& step_values() const { return step_values_; }
  const std::vector<double>& step_masses() const { return step_masses_; }

  /// Exact int_0^s f* for step rearrangements; throws ArgumentError otherwise.
  double step_cumulative(double s) const;

 private:
  std::function<double(double)> evaluator_;
  std::string source_;
  std::vector<double> step_values_;
  std::vector<double> step_masses_;
  std::vector<double> step_cum_mass_;
  std::vector<double> step_cum_integral_;
};

/// Weighted point masses: the discrete measure a quadrature rule induces.
struct WeightedSamples {
  std::vector<double> values;
  std::vector<double> weights;  ///< sum to 1
};

/// f sampled on the rule's product grid with weights w_i / T.
WeightedSamples symbol_samples(const SphereSymbol& symbol, const QuadratureRule& rule);

/// Rule used for symbol rearrangements: 2048 psi nodes x 512 theta nodes.
const QuadratureRule& rearrangement_rule();

/// Sorts the pieces non-increasing. Exact.
StepFunction rearrange_step(const StepFunction& g);

/// Smoothed-indicator profile of f on a uniform threshold grid covering
/// [-sup_bound, sup_bound] (padded by one cell each side). A sample set with a
/// single value yields an exact atomic profile.
DistributionProfile distribution_of(const SphereSymbol& symbol, const QuadratureRule& rule,
                                    int n_thresholds = kDefaultThresholds);
/// Exact atomic profile of a step function on ([0,1], Lebesgue).
DistributionProfile distribution_of(const StepFunction& g);
/// Exact atomic profile of weighted point masses (equal values merged).
DistributionProfile distribution_of(const WeightedSamples& samples);

/// f*(s) = inf{t : d(t) < s} by monotone inversion of the profile.
Rearrangement rearrangement_from(const DistributionProfile& profile, std::string source);

/// f* of a sphere symbol through its threshold profile.
Rearrangement rearrange_symbol(const SphereSymbol& symbol, const QuadratureRule& rule,
                               int n_thresholds = kDefaultThresholds);
/// f* of a step function seen as a function on ([0,1], Lebesgue); exact.
Rearrangement rearrange_function(const StepFunction& g, std::string source = "step");
/// f* of weighted point masses; exact for the discrete measure.
Rearrangement rearrange_samples(const WeightedSamples& samples, std::string source);

/// g(t) = inf{x : F(x) > t}, 0 < t < 1.
std::function<double(double)> generalized_inverse(const DistributionProfile& profile);

struct SkorokhodCheck {
  double sup_error = 0.0;  ///< sup over the kept grid points of |g(1-t) - f*(t)|
  double tolerance = 0.0;  ///< resolution of the construction
  int points_checked = 0;
};

/// Compares the generalized inverse of the smoothed profile against the
/// sorted-sample rearrangement on the dense rule.
SkorokhodCheck check_skorokhod_identity(const SphereSymbol& symbol, const QuadratureRule& rule,
                                        std::span<const double> grid);
/// Exact atomic route; grid points within one grid cell of a jump of f* are skipped.
SkorokhodCheck check_skorokhod_identity(const StepFunction& g, std::span<const double> grid);

/// CSV with header "s,fstar".
void write_rearrangement_csv(std::ostream& os, const Rearrangement& r, std::span<const double> s_grid);

}  // namespace tlab
