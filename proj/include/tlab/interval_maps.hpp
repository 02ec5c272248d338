#pragma once

// Measure-preserving self-maps of [0,1): dyadic permutations (piecewise
// translations of the uniform (m+1)-partition), a small zoo of analytic maps,
// transport matrices and strong-operator-topology distances.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tlab/spectra.hpp"

namespace tlab {

/// sigma in S_{m+1}, acting on [0,1) by translating I_k onto I_sigma(k).
class DyadicPermutation {
 public:
  /// Throws ArgumentError unless sigma is a bijection of {0..m}.
  explicit DyadicPermutation(std::vector<int> sigma);
  static DyadicPermutation identity(int m);
  /// k -> k + shift mod (m+1).
  static DyadicPermutation cyclic_shift(int m, int shift);

  int rank() const { return static_cast<int>(sigma_.size()) - 1; }
  const std::vector<int>& sigma() const { return sigma_; }
  int operator[](int k) const { return sigma_[static_cast<std::size_t>(k)]; }

  /// (p o q)(k) = p(q(k)).
  DyadicPermutation compose(const DyadicPermutation& q) const;
  /// Same map on a partition `factor` times finer.
  DyadicPermutation refine(int factor) const;

  friend bool operator==(const DyadicPermutation&, const DyadicPermutation&) = default;

 private:
  std::vector<int> sigma_;
};

/// x + (sigma(k) - k)/(m+1) with k = floor(x (m+1)). ArgumentError unless 0 <= x < 1.
double apply_dyadic(const DyadicPermutation& p, double x);

/// Affine branch x -> slope * x + offset on [lo, hi).
struct AffinePiece {
  double lo, hi, slope, offset;
};

struct MeasurePreservingMap {
  std::string name;
  std::function<double(double)> evaluator;
  bool invertible = false;
  /// Present for piecewise-affine maps; enables exact transport matrices.
  std::optional<std::vector<AffinePiece>> pieces;

  double operator()(double x) const { return evaluator(x); }
};

MeasurePreservingMap identity_map();
/// x -> x + alpha mod 1.
MeasurePreservingMap rotation_map(double alpha);
/// x -> 2x mod 1.
MeasurePreservingMap doubling_map();
/// Tent map 2x on [0,1/2), 2 - 2x on [1/2,1): the interval factor of the folded baker map.
MeasurePreservingMap baker_map();
MeasurePreservingMap as_map(const DyadicPermutation& p);

/// Zoo lookup: identity, rotation:<float>, doubling, baker. ArgumentError if unknown.
MeasurePreservingMap map_by_name(const std::string& spec);

struct HistogramCheck {
  std::vector<double> bin_mass;
  double worst_deviation = 0.0;
  bool passes = false;
};
/// Pushes forward `points` golden-ratio points through phi into `bins` bins;
/// passes when every bin mass is within delta of 1/bins.
HistogramCheck histogram_check(const MeasurePreservingMap& phi, int points = 100000, int bins = 16,
                               double delta = 0.005);

struct TransportMatrix {
  int rank = 0;
  Eigen::MatrixXd entries;  ///< A_jk = (m+1) |I_k cap phi^{-1}(I_j)|
  double max_marginal_deviation = 0.0;  ///< worst |row or column sum - 1|, reported not corrected
  bool analytic = false;
};

/// Exact for piecewise-affine maps; otherwise stratified Monte-Carlo with
/// `samples_per_cell` uniform points per source interval. InputError when the
/// histogram check fails.
TransportMatrix transport_matrix(const MeasurePreservingMap& phi, int m, long samples_per_cell = 250000,
                                 std::uint64_t seed = 0);

/// Maximum-weight assignment: returns sigma maximizing sum_k w(sigma(k), k),
/// lexicographically smallest among the optimal ones. Exact (Hungarian).
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

/// sigma maximizing the transport overlap sum_k A_{sigma(k), k}.
DyadicPermutation best_dyadic_approximation(const MeasurePreservingMap& phi, int m);

/// Number of midpoints used by sot_distance unless told otherwise.
inline constexpr int kSotGrid = 1 << 20;

/// ||g o S - g o T||_2 by the midpoint rule on `grid` uniform cells.
double sot_distance(const MeasurePreservingMap& s, const MeasurePreservingMap& t,
                    const std::function<double(double)>& g, int grid = kSotGrid);
double sot_distance(const MeasurePreservingMap& s, const MeasurePreservingMap& t, const StepFunction& g,
                    int grid = kSotGrid);

/// Pieces values[k] = g.values[sigma(k)], refining g or p first when ranks differ.
StepFunction compose_step(const StepFunction& g, const DyadicPermutation& p);

/// Whitespace-separated integers.
std::string serialize_permutation(const DyadicPermutation& p);
DyadicPermutation parse_permutation(const std::string& text);

}  // namespace tlab
