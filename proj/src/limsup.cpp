#include "tlab/limsup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tlab/error.hpp"
#include "tlab/random.hpp"

namespace tlab {

namespace {

constexpr const char* kSurrogateNote =
    "finite-rank surrogate: certifies the inclusions at the listed ranks only, not the weak-closure equality";

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_increasing(const std::vector<int>& ranks) {
  if (ranks.empty()) throw ArgumentError("need at least one rank");
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 0) throw ArgumentError("ranks must be non-negative");
    if (i && ranks[i] <= ranks[i - 1]) throw ArgumentError("ranks must be strictly increasing");
  }
}

std::vector<double> uniform_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i + 1) / n;
  return g;
}

ComplexMatrix haar_unitary(int n, Rng& rng) {
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = {rng.normal() / std::sqrt(2.0), rng.normal() / std::sqrt(2.0)};
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace

void ExperimentReport::add_error(std::string parameters, double measured, double tolerance) {
  rows.push_back({std::move(parameters), measured, tolerance, measured <= tolerance});
}

void ExperimentReport::add_certificate(std::string parameters, const MajorizationCertificate& c, double tol) {
  const double violation = std::max({0.0, -c.min_slack(), c.total_residual});
  rows.push_back({std::move(parameters), violation, tol, c.holds});
}

bool ExperimentReport::all_pass() const { return failures() == 0; }

std::size_t ExperimentReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.pass; }));
}

StepFunction embed_pm(std::vector<double> a) { return StepFunction(std::move(a)); }

MajorizationCertificate em_membership(const StepFunction& g, const Spectrum& s, double tol) {
  if (g.rank() != s.order) throw ArgumentError("em_membership: step rank differs from spectrum order");
  return majorizes(s.values, g.values(), tol);
}

ClaimAOutcome claim_a_experiment(const SphereSymbol& symbol, const MeasurePreservingMap& phi,
                                 const std::vector<int>& ranks, const ClaimAOptions& options) {
  require_increasing(ranks);
  const Rearrangement fstar = options.fstar ? *options.fstar : rearrange_symbol(symbol, rearrangement_rule());
  const int n = options.grid;

  // f* o phi and phi on the midpoint grid are rank independent.
  std::vector<double> phi_x(static_cast<std::size_t>(n)), fstar_phi(static_cast<std::size_t>(n)),
      fstar_x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    phi_x[i] = phi(x);
    fstar_phi[i] = fstar(phi_x[i]);
    fstar_x[i] = fstar(x);
  }

  ClaimAOutcome out;
  out.report.name = "claim-a";
  out.report.note = kSurrogateNote;
  out.report.symbol = symbol.name;
  out.report.ranks = ranks;
  for (int m : ranks) {
    const auto t = assemble(symbol, m, QuadratureRule::for_rank(m), options.threads);
    const auto spectrum = eigenvalues(t);
    const auto lambda = lambda_step(spectrum);
    const auto sigma = best_dyadic_approximation(phi, m);
    const auto composed = compose_step(lambda, sigma);
    const auto sigma_map = as_map(sigma);

    ClaimARow row;
    row.m = m;
    double s6 = 0.0, s7 = 0.0, s8 = 0.0, worst_map_gap = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      const double a = composed(x);
      const double b = lambda(phi_x[i]);
      s6 += (a - b) * (a - b);
      s7 += (b - fstar_phi[i]) * (b - fstar_phi[i]);
      s8 += (a - fstar_phi[i]) * (a - fstar_phi[i]);
      row.sup_gap = std::max(row.sup_gap, std::abs(lambda(x) - fstar_x[i]));
      worst_map_gap = std::max(worst_map_gap, std::abs(sigma_map(x) - phi_x[i]));
    }
    row.eq6 = std::sqrt(s6 / n);
    row.eq7 = std::sqrt(s7 / n);
    row.eq8 = std::sqrt(s8 / n);
    row.representable = worst_map_gap <= 1e-12;

    const std::string p = "m=" + std::to_string(m) + ";map=" + phi.name;
    double lambda_sup = 0.0;
    for (double v : spectrum.values) lambda_sup = std::max(lambda_sup, std::abs(v));
    out.report.add_error(p + ";quantity=eq6", row.eq6, row.representable ? 0.0 : 2.0 * lambda_sup);
    out.report.add_error(p + ";quantity=eq7", row.eq7, row.sup_gap + 1e-12);
    out.report.add_error(p + ";quantity=eq8_triangle", row.eq8, row.eq6 + row.eq7 + 1e-12);
    const double tol = default_tolerance(spectrum.values);
    out.report.add_certificate(p + ";quantity=composed_in_Em", em_membership(composed, spectrum, tol), tol);

    out.rows.push_back(row);
    out.composed.push_back(composed);
    out.spectra.push_back(spectrum);
  }
  return out;
}

ClaimBOutcome claim_b_experiment(const SphereSymbol& symbol, int m, int n_samples, std::uint64_t seed,
                                 const ClaimBOptions& options) {
  if (n_samples < 1) throw ArgumentError("claim_b_experiment: need n_samples >= 1");
  const Rearrangement fstar = options.fstar ? *options.fstar : rearrange_symbol(symbol, rearrangement_rule());
  const auto t = assemble(symbol, m, QuadratureRule::for_rank(m), options.threads);
  const auto spec = eigenvalues(t);
  const auto lambda = lambda_step(spec);
  const auto grid = uniform_grid(options.grid);

  const auto c_f = cumulative_rearranged(fstar, grid);
  const auto c_lambda = cumulative_rearranged(lambda, grid);
  ClaimBOutcome out;
  for (std::size_t j = 0; j < grid.size(); ++j)
    out.epsilon = std::max(out.epsilon, std::abs(c_lambda.values[j] - c_f.values[j]));
  out.epsilon += c_f.tolerance;

  out.report.name = "claim-b";
  out.report.note = kSurrogateNote;
  out.report.symbol = symbol.name;
  out.report.seed = seed;
  out.report.ranks = {m};
  const double tol = default_tolerance(spec.values);
  const auto samples = sample_hull(spec.values, n_samples, seed, options.n_perm);
  for (int i = 0; i < n_samples; ++i) {
    const auto g = embed_pm(samples[static_cast<std::size_t>(i)]);
    const std::string p = "m=" + std::to_string(m) + ";sample=" + std::to_string(i);
    const auto rado = em_membership(g, spec, tol);
    const auto cont = step_majorizes(lambda, g, tol);
    const auto c_g = cumulative_rearranged(g, grid);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.size(); ++j) excess = std::max(excess, c_g.values[j] - c_f.values[j]);
    out.report.add_certificate(p + ";check=rado", rado, tol);
    out.report.add_certificate(p + ";check=step", cont, tol);
    out.report.add_error(p + ";check=relaxed_fstar", excess, out.epsilon + tol);
    out.rado_pass += rado.holds;
    out.step_pass += cont.holds;
    out.relaxed_pass += excess <= out.epsilon + tol;
  }
  return out;
}

ExperimentReport schur_type_projection_check(const SphereSymbol& symbol, const QuadratureRule& rule,
                                             std::span<const double> s_grid, const ProjectionOptions& options) {
  const auto z = rule.z_nodes();
  const auto w = rule.z_weights();
  WeightedSamples projected;
  projected.values = project_theta_average(symbol, z, rule);
  for (double wi : w) projected.weights.push_back(wi / rule.mass());

  const auto p_star = rearrange_samples(projected, "P(" + symbol.name + ")");
  const auto f_star = rearrange_samples(symbol_samples(symbol, rule), symbol.name);
  const auto c_p = cumulative_rearranged(p_star, s_grid);
  const auto c_f = cumulative_rearranged(f_star, s_grid);

  ExperimentReport r;
  r.name = "schur-projection";
  r.note = "int_0^s P(f)* <= int_0^s f* on the grid, equal totals";
  r.symbol = symbol.name;
  for (std::size_t j = 0; j < s_grid.size(); ++j)
    r.add_error("s=" + fmt(s_grid[j]), c_p.values[j] - c_f.values[j], options.cumulative_tol);
  r.add_error("s=1;quantity=total_residual", std::abs(p_star.step_cumulative(1.0) - f_star.step_cumulative(1.0)),
              options.total_tol);
  return r;
}

ExperimentReport weak_pairing_diagnostics(const std::vector<StepFunction>& g_sequence,
                                          const std::function<double(double)>& target,
                                          const std::vector<StepFunction>& dictionary, int grid) {
  if (grid < 1) throw ArgumentError("weak_pairing_diagnostics: grid must be positive");
  ExperimentReport r;
  r.name = "weak-pairing";
  r.note = "pairing differences bounded by Cauchy-Schwarz; illustrates, does not prove, weak convergence";
  std::vector<double> tx(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) tx[i] = target((i + 0.5) / grid);
  for (std::size_t n = 0; n < g_sequence.size(); ++n) {
    const auto& g = g_sequence[n];
    double dist2 = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double d = g((i + 0.5) / grid) - tx[i];
      dist2 += d * d;
    }
    const double dist = std::sqrt(dist2 / grid);
    for (std::size_t hi = 0; hi < dictionary.size(); ++hi) {
      const auto& h = dictionary[hi];
      double pg = 0.0, pt = 0.0, hh = 0.0;
      for (int i = 0; i < grid; ++i) {
        const double x = (i + 0.5) / grid;
        const double hv = h(x);
        pg += g(x) * hv;
        pt += tx[i] * hv;
        hh += hv * hv;
      }
      const double diff = std::abs(pg - pt) / grid;
      r.add_error("n=" + std::to_string(n) + ";rank=" + std::to_string(g.rank()) + ";h=" + std::to_string(hi), diff,
                  dist * std::sqrt(hh / grid) + 1e-12);
    }
  }
  return r;
}

ExperimentReport schur_property_experiment(int m, int trials, std::uint64_t seed, double tol) {
  if (m < 0 || trials < 1) throw ArgumentError("schur_property_experiment: need m >= 0 and trials >= 1");
  ExperimentReport r;
  r.name = "schur";
  r.note = "diag(U Lambda U^*) majorized by its spectrum";
  r.seed = seed;
  r.ranks = {m};
  Rng rng(seed);
  const int n = m + 1;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXcd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = 2.0 * rng.uniform() - 1.0;
    const ComplexMatrix u = haar_unitary(n, rng);
    ComplexMatrix a = u * lam.asDiagonal() * u.adjoint();
    a = (0.5 * (a + a.adjoint())).eval();
    for (int i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    const auto spec = eigenvalues(a);
    r.add_certificate("m=" + std::to_string(m) + ";trial=" + std::to_string(trial), schur_check(a, spec, tol), tol);
  }
  return r;
}

bool decreasing_trend(const std::vector<double>& values, int allowed, double floor) {
  if (values.empty()) return false;
  std::vector<double> v(values);
  bool all_floor = true;
  for (auto& x : v) {
    if (x <= floor) x = 0.0;
    else all_floor = false;
  }
  if (all_floor) return true;
  int inversions = 0;
  for (std::size_t i = 1; i < v.size(); ++i) inversions += v[i] > v[i - 1];
  return inversions <= allowed && v.back() < v.front();
}

namespace {
void add_trend_rows(ExperimentReport& r, const std::string& p, const std::vector<double>& v, double floor) {
  std::vector<double> c(v);
  bool all_floor = true;
  for (auto& x : c) {
    if (x <= floor) x = 0.0;
    else all_floor = false;
  }
  int inversions = 0;
  for (std::size_t i = 1; i < c.size(); ++i) inversions += c[i] > c[i - 1];
  r.add_error(p + ";quantity=inversions", inversions, 1.0);
  if (all_floor) {
    r.add_error(p + ";quantity=last_over_first", 0.0, 0.0);
  } else {
    const double ratio = c.front() > 0.0 ? c.back() / c.front() : std::numeric_limits<double>::max();
    r.add_error(p + ";quantity=last_over_first", ratio, std::nextafter(1.0, 0.0));
  }
}
}  // namespace

SzegoOutcome szego_experiment(const SphereSymbol& symbol, const std::vector<int>& ranks, int threads) {
  require_increasing(ranks);
  const std::vector<std::pair<std::string, std::function<double(double)>>> phis = {
      {"t", [](double t) { return t; }},
      {"t2", [](double t) { return t * t; }},
      {"t3", [](double t) { return t * t * t; }}};
  SzegoOutcome out;
  out.report.name = "szego";
  out.report.note = "|mean phi(lambda) - int phi(f) dmu| should shrink with m";
  out.report.symbol = symbol.name;
  out.report.ranks = ranks;
  std::vector<std::vector<double>> errors(phis.size());
  for (int m : ranks) {
    const auto rule = QuadratureRule::for_rank(m);
    const auto spec = eigenvalues(assemble(symbol, m, rule, threads));
    for (std::size_t p = 0; p < phis.size(); ++p) {
      const double e = szego_error(spec, symbol, phis[p].second, rule);
      out.rows.push_back({m, phis[p].first, e});
      errors[p].push_back(e);
    }
  }
  const double b = std::max(1.0, symbol.sup_bound);
  const double floor = 1e-12 * b * b * b;
  for (std::size_t p = 0; p < phis.size(); ++p)
    add_trend_rows(out.report, "phi=" + phis[p].first, errors[p], floor);
  return out;
}

DensityOutcome density_experiment(const MeasurePreservingMap& phi, const std::vector<int>& ranks, int grid) {
  require_increasing(ranks);
  const std::vector<std::pair<std::string, std::function<double(double)>>> tests = {
      {"1-2s", [](double s) { return 1.0 - 2.0 * s; }}, {"cos(pi s)", [](double s) { return std::cos(kPi * s); }}};
  DensityOutcome out;
  out.report.name = "density";
  out.report.note = "SOT distance of assignment approximants; finite test dictionary only";
  out.report.symbol = phi.name;
  out.report.ranks = ranks;
  for (int m : ranks) {
    const auto sigma = best_dyadic_approximation(phi, m);
    const auto sigma_map = as_map(sigma);
    std::vector<double> d;
    for (const auto& [name, g] : tests) d.push_back(sot_distance(sigma_map, phi, g, grid));
    out.permutations.push_back(sigma);
    out.distances.push_back(std::move(d));
  }
  for (std::size_t g = 0; g < tests.size(); ++g) {
    std::vector<double> series;
    for (const auto& d : out.distances) series.push_back(d[g]);
    for (std::size_t i = 0; i < ranks.size(); ++i)
      out.report.add_error("m=" + std::to_string(ranks[i]) + ";g=" + tests[g].first, series[i], 2.0);
    add_trend_rows(out.report, "g=" + tests[g].first, series, 1e-14);
  }
  return out;
}

}  // namespace tlab
