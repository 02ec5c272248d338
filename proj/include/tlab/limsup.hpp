#pragma once

// Finite-rank certificates for the convexity statements: the p^m embedding,
// membership in E_m = p^m(co(Sigma_m lambda^m)), the two inclusion claims and
// the theta-projection majorization. Every report states that it certifies a
// finite surrogate, not the infinite-dimensional weak-closure equality.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tlab/interval_maps.hpp"
#include "tlab/majorize.hpp"

namespace tlab {

struct ReportRow {
  std::string parameters;  ///< "key=value;key=value"
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  std::string note;
  std::string symbol;
  std::uint64_t seed = 0;
  std::vector<int> ranks;
  std::vector<ReportRow> rows;

  /// pass = measured <= tolerance
  void add_error(std::string parameters, double measured, double tolerance);
  /// measured = worst prefix violation (>= 0), tolerance = comparison tol, pass = holds
  void add_certificate(std::string parameters, const MajorizationCertificate& c, double tol);
  bool all_pass() const;
  std::size_t failures() const;
};

/// Header "experiment,parameters,measured,tolerance,pass".
void write_report_csv(std::ostream& os, const ExperimentReport& r);
/// JSON object mirroring ExperimentReport.
void write_report_json(std::ostream& os, const ExperimentReport& r);

/// p^m(a) = sum_k a_k chi_{I_k}.
StepFunction embed_pm(std::vector<double> a);

/// values(g) < lambda^m, i.e. g in E_m. ArgumentError when ranks differ.
MajorizationCertificate em_membership(const StepFunction& g, const Spectrum& s, double tol);

struct ClaimAOptions {
  int grid = 1 << 16;                   ///< midpoints for the L2 norms
  std::optional<Rearrangement> fstar;   ///< defaults to rearrange_symbol on the dense rule
  int threads = 1;
};

struct ClaimARow {
  int m = 0;
  double eq6 = 0.0;  ///< ||Lambda o sigma - Lambda o phi||
  double eq7 = 0.0;  ///< ||Lambda o phi - f* o phi||
  double eq8 = 0.0;  ///< ||Lambda o sigma - f* o phi||
  double sup_gap = 0.0;  ///< sup |Lambda - f*| on the grid
  bool representable = false;  ///< sigma reproduces phi on every grid midpoint
};

struct ClaimAOutcome {
  ExperimentReport report;
  std::vector<ClaimARow> rows;
  std::vector<StepFunction> composed;  ///< Lambda^m o sigma, one per rank
  std::vector<Spectrum> spectra;
};

/// For each rank: T^m_f, Lambda^m, sigma = best_dyadic_approximation(phi, m) and the
/// three L2 errors; eq8 is checked against eq6 + eq7 + 1e-12.
ClaimAOutcome claim_a_experiment(const SphereSymbol& symbol, const MeasurePreservingMap& phi,
                                 const std::vector<int>& ranks, const ClaimAOptions& options = {});

struct ClaimBOptions {
  int grid = 256;
  int n_perm = 8;
  std::optional<Rearrangement> fstar;
  int threads = 1;
};

struct ClaimBOutcome {
  ExperimentReport report;
  double epsilon = 0.0;  ///< max_s |int_0^s Lambda^m - int_0^s f*| (+ quadrature tolerance)
  int rado_pass = 0;
  int step_pass = 0;
  int relaxed_pass = 0;
};

/// Samples of co(Sigma_m lambda^m) checked for (i) E_m membership, (ii) continuous
/// majorization by Lambda^m, (iii) the f*-relaxed cumulative bound with slack epsilon.
ClaimBOutcome claim_b_experiment(const SphereSymbol& symbol, int m, int n_samples, std::uint64_t seed,
                                 const ClaimBOptions& options = {});

struct ProjectionOptions {
  double cumulative_tol = 1e-6;
  double total_tol = 1e-8;
};

/// int_0^s P(f)* <= int_0^s f* + tol on s_grid, with P(f) and f on the rule's nodes.
ExperimentReport schur_type_projection_check(const SphereSymbol& symbol, const QuadratureRule& rule,
                                             std::span<const double> s_grid, const ProjectionOptions& options = {});

/// |<g_n, h> - <target, h>| per (n, h), checked against the Cauchy-Schwarz bound
/// ||g_n - target||_2 ||h||_2.
ExperimentReport weak_pairing_diagnostics(const std::vector<StepFunction>& g_sequence,
                                          const std::function<double(double)>& target,
                                          const std::vector<StepFunction>& dictionary, int grid = 1 << 16);

/// Haar-random unitary conjugations of random spectra, certified diag < lambda.
ExperimentReport schur_property_experiment(int m, int trials, std::uint64_t seed, double tol = 1e-10);

struct SzegoOutcome {
  ExperimentReport report;
  std::vector<SzegoRow> rows;
};
/// szego_error for phi in {t, t^2, t^3} at each rank.
SzegoOutcome szego_experiment(const SphereSymbol& symbol, const std::vector<int>& ranks, int threads = 1);

/// Assignment approximants of phi at each rank, with SOT distances for g in {1-2s, cos(pi s)}.
struct DensityOutcome {
  ExperimentReport report;
  std::vector<DyadicPermutation> permutations;
  std::vector<std::vector<double>> distances;  ///< [rank][test function]
};
DensityOutcome density_experiment(const MeasurePreservingMap& phi, const std::vector<int>& ranks,
                                  int grid = kSotGrid);

/// Non-increasing up to `allowed` inversions, and last < first. Values at or below
/// `floor` count as exact zeros; an all-floor sequence passes.
bool decreasing_trend(const std::vector<double>& values, int allowed = 1, double floor = 0.0);

}  // namespace tlab
