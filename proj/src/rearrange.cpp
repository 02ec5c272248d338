#include "tlab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "tlab/error.hpp"

namespace tlab {

namespace {

// Sorted (value ascending) distinct atoms with their masses, normalized to total 1.
DistributionProfile atomic_profile(std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double total = 0.0;
  for (const auto& p : pts) total += p.second;
  if (!(total > 0.0)) throw ArgumentError("distribution of an empty or massless sample");

  DistributionProfile prof;
  prof.atomic = true;
  for (const auto& [v, w] : pts) {
    if (!prof.thresholds.empty() && prof.thresholds.back() == v) {
      prof.atom_mass.back() += w;
    } else {
      prof.thresholds.push_back(v);
      prof.atom_mass.push_back(w);
    }
  }
  double below = 0.0;
  prof.below_measure.reserve(prof.thresholds.size());
  for (auto& m : prof.atom_mass) {
    m /= total;
    prof.below_measure.push_back(below);
    below += m;
  }
  prof.total_mass = 1.0;
  return prof;
}

double grid_cell(std::span<const double> grid) {
  double cell = grid.empty() ? 0.0 : 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 1; i < grid.size(); ++i) cell = std::max(cell, grid[i] - grid[i - 1]);
  return cell;
}

}  // namespace

double DistributionProfile::below(double t) const {
  if (thresholds.empty()) return 0.0;
  if (atomic) {
    const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), t);
    if (it == thresholds.end()) return total_mass;
    return below_measure[static_cast<std::size_t>(it - thresholds.begin())];
  }
  if (t <= thresholds.front()) return below_measure.front();
  if (t >= thresholds.back()) return below_measure.back();
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - thresholds.begin());
  const double a = thresholds[j - 1], b = thresholds[j];
  const double u = (t - a) / (b - a);
  return below_measure[j - 1] + u * (below_measure[j] - below_measure[j - 1]);
}

Rearrangement Rearrangement::steps(std::vector<double> values, std::vector<double> masses, std::string source) {
  if (values.empty() || values.size() != masses.size())
    throw ArgumentError("step rearrangement needs matching non-empty values and masses");
  Rearrangement r;
  r.source_ = std::move(source);
  r.step_values_ = std::move(values);
  r.step_masses_ = std::move(masses);
  double c = 0.0, integral = 0.0;
  for (std::size_t i = 0; i < r.step_values_.size(); ++i) {
    if (i && !(r.step_values_[i] < r.step_values_[i - 1]))
      throw ArgumentError("step rearrangement values must be strictly decreasing");
    c += r.step_masses_[i];
    integral += r.step_values_[i] * r.step_masses_[i];
    r.step_cum_mass_.push_back(c);
    r.step_cum_integral_.push_back(integral);
  }
  return r;
}

Rearrangement Rearrangement::function(std::function<double(double)> evaluator, std::string source) {
  Rearrangement r;
  r.evaluator_ = std::move(evaluator);
  r.source_ = std::move(source);
  return r;
}

double Rearrangement::operator()(double s) const {
  if (!is_step()) return evaluator_(s);
  // smallest cell whose cumulative mass reaches s
  const auto it = std::lower_bound(step_cum_mass_.begin(), step_cum_mass_.end(), s);
  if (it == step_cum_mass_.end()) return step_values_.back();
  return step_values_[static_cast<std::size_t>(it - step_cum_mass_.begin())];
}

double Rearrangement::step_cumulative(double s) const {
  if (!is_step()) throw ArgumentError("step_cumulative on a non-step rearrangement");
  if (s <= 0.0) return 0.0;
  const auto it = std::lower_bound(step_cum_mass_.begin(), step_cum_mass_.end(), s);
  if (it == step_cum_mass_.end()) return step_cum_integral_.back();
  const std::size_t r = static_cast<std::size_t>(it - step_cum_mass_.begin());
  const double before_mass = r ? step_cum_mass_[r - 1] : 0.0;
  const double before_int = r ? step_cum_integral_[r - 1] : 0.0;
  return before_int + step_values_[r] * (s - before_mass);
}

WeightedSamples symbol_samples(const SphereSymbol& symbol, const QuadratureRule& rule) {
  const auto z = rule.z_nodes();
  const auto w = rule.z_weights();
  const int nt = rule.theta_count();
  WeightedSamples out;
  out.values.reserve(z.size() * nt);
  out.weights.reserve(z.size() * nt);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double wi = w[i] / (rule.mass() * nt);
    for (int t = 0; t < nt; ++t) {
      const double v = symbol(z[i], rule.theta(t));
      if (!std::isfinite(v))
        throw DomainEvaluationError("symbol '" + symbol.name + "' is not finite on the sample grid", z[i],
                                    rule.theta(t));
      out.values.push_back(v);
      out.weights.push_back(wi);
    }
  }
  return out;
}

const QuadratureRule& rearrangement_rule() {
  static const QuadratureRule rule(2048, 512, 64);
  return rule;
}

StepFunction rearrange_step(const StepFunction& g) {
  auto v = g.values();
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return StepFunction(std::move(v));
}

DistributionProfile distribution_of(const WeightedSamples& samples) {
  if (samples.values.size() != samples.weights.size())
    throw ArgumentError("weighted samples: values and weights differ in length");
  std::vector<std::pair<double, double>> pts(samples.values.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {samples.values[i], samples.weights[i]};
  return atomic_profile(std::move(pts));
}

DistributionProfile distribution_of(const StepFunction& g) {
  // Count equal pieces first so each atom mass is count / (m+1) exactly rounded.
  auto v = g.values();
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    pts.emplace_back(v[i], static_cast<double>(j - i) / static_cast<double>(v.size()));
    i = j;
  }
  auto prof = atomic_profile(std::move(pts));
  return prof;
}

DistributionProfile distribution_of(const SphereSymbol& symbol, const QuadratureRule& rule, int n_thresholds) {
  if (n_thresholds < 2) throw ArgumentError("distribution_of: need at least 2 thresholds");
  const auto samples = symbol_samples(symbol, rule);
  const auto [lo_it, hi_it] = std::minmax_element(samples.values.begin(), samples.values.end());
  if (*lo_it == *hi_it || symbol.sup_bound == 0.0) return distribution_of(samples);

  // Grid t_j = lo + j h with t_0 = -B - h and t_{n-1} = B + h.
  const double bound = std::max({symbol.sup_bound, std::abs(*lo_it), std::abs(*hi_it)});
  const int n = std::max(n_thresholds, 4);
  const double h = 2.0 * bound / (n - 3);
  const double lo = -bound - h;

  std::vector<double> partial(n, 0.0), full_from(n + 1, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    const double w = samples.weights[i];
    total += w;
    // Indicator of {f < t} smoothed to a ramp of width h centred on the sample.
    const double u = (samples.values[i] - lo) / h;
    const long j0 = static_cast<long>(std::floor(u + 0.5));
    const double frac = static_cast<double>(j0) - u + 0.5;
    if (j0 >= 0 && j0 < n) partial[static_cast<std::size_t>(j0)] += w * frac;
    full_from[static_cast<std::size_t>(std::clamp<long>(j0 + 1, 0, n))] += w;
  }

  DistributionProfile prof;
  prof.thresholds.resize(n);
  prof.below_measure.resize(n);
  double running = 0.0;
  for (int j = 0; j < n; ++j) {
    running += full_from[j];
    prof.thresholds[j] = lo + j * h;
    prof.below_measure[j] = std::clamp((running + partial[j]) / total, 0.0, 1.0);
  }
  // Enforce monotonicity against summation noise.
  for (int j = 1; j < n; ++j) prof.below_measure[j] = std::max(prof.below_measure[j], prof.below_measure[j - 1]);
  prof.total_mass = 1.0;
  return prof;
}

Rearrangement rearrangement_from(const DistributionProfile& profile, std::string source) {
  if (profile.thresholds.empty()) throw ArgumentError("rearrangement of an empty profile");
  if (profile.atomic) {
    std::vector<double> values(profile.thresholds.rbegin(), profile.thresholds.rend());
    std::vector<double> masses(profile.atom_mass.rbegin(), profile.atom_mass.rend());
    return Rearrangement::steps(std::move(values), std::move(masses), std::move(source));
  }
  const auto t = profile.thresholds;
  std::vector<double> d(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) d[j] = profile.total_mass - profile.below_measure[j];
  return Rearrangement::function(
      [t, d](double s) {
        // first j with d_j < s (d is non-increasing)
        const auto it = std::partition_point(d.begin(), d.end(), [s](double v) { return !(v < s); });
        if (it == d.end()) return t.back();
        const std::size_t j = static_cast<std::size_t>(it - d.begin());
        if (j == 0) return t.front();
        const double gap = d[j - 1] - d[j];
        return t[j - 1] + (d[j - 1] - s) / gap * (t[j] - t[j - 1]);
      },
      std::move(source));
}

Rearrangement rearrange_symbol(const SphereSymbol& symbol, const QuadratureRule& rule, int n_thresholds) {
  if (n_thresholds < 2) throw ArgumentError("rearrange_symbol: need at least 2 thresholds");
  if (symbol.sup_bound == 0.0) return Rearrangement::steps({0.0}, {1.0}, symbol.name);
  return rearrangement_from(distribution_of(symbol, rule, n_thresholds), symbol.name);
}

Rearrangement rearrange_function(const StepFunction& g, std::string source) {
  return rearrangement_from(distribution_of(g), std::move(source));
}

Rearrangement rearrange_samples(const WeightedSamples& samples, std::string source) {
  return rearrangement_from(distribution_of(samples), std::move(source));
}

std::function<double(double)> generalized_inverse(const DistributionProfile& profile) {
  if (profile.thresholds.empty()) throw ArgumentError("generalized inverse of an empty profile");
  if (profile.atomic) {
    std::vector<double> cum_le(profile.thresholds.size());
    for (std::size_t k = 0; k < cum_le.size(); ++k) cum_le[k] = profile.below_measure[k] + profile.atom_mass[k];
    return [atoms = profile.thresholds, cum_le](double t) {
      const auto it = std::upper_bound(cum_le.begin(), cum_le.end(), t);
      if (it == cum_le.end()) return atoms.back();
      return atoms[static_cast<std::size_t>(it - cum_le.begin())];
    };
  }
  return [x = profile.thresholds, f = profile.below_measure](double t) {
    const auto it = std::upper_bound(f.begin(), f.end(), t);
    if (it == f.end()) return x.back();
    const std::size_t j = static_cast<std::size_t>(it - f.begin());
    if (j == 0) return x.front();
    return x[j - 1] + (t - f[j - 1]) / (f[j] - f[j - 1]) * (x[j] - x[j - 1]);
  };
}

SkorokhodCheck check_skorokhod_identity(const SphereSymbol& symbol, const QuadratureRule& rule,
                                        std::span<const double> grid) {
  const auto profile = distribution_of(symbol, rule);
  const auto g = generalized_inverse(profile);
  const auto samples = symbol_samples(symbol, rule);
  const auto fstar = rearrange_samples(samples, symbol.name);

  SkorokhodCheck out;
  if (!profile.atomic) {
    const double h = profile.thresholds[1] - profile.thresholds[0];
    double max_gap = 0.0;
    const auto& vals = fstar.step_values();
    for (std::size_t i = 1; i < vals.size(); ++i) max_gap = std::max(max_gap, vals[i - 1] - vals[i]);
    out.tolerance = 2.0 * h + max_gap;
  }
  for (double t : grid) {
    out.sup_error = std::max(out.sup_error, std::abs(g(1.0 - t) - fstar(t)));
    ++out.points_checked;
  }
  return out;
}

SkorokhodCheck check_skorokhod_identity(const StepFunction& step, std::span<const double> grid) {
  const auto profile = distribution_of(step);
  const auto g = generalized_inverse(profile);
  const auto fstar = rearrange_function(step);
  const double cell = grid_cell(grid);
  std::vector<double> jumps;
  const auto& masses = fstar.step_masses();
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < masses.size(); ++i) jumps.push_back(c += masses[i]);

  SkorokhodCheck out;
  for (double t : grid) {
    const bool near_jump =
        std::any_of(jumps.begin(), jumps.end(), [&](double j) { return std::abs(t - j) <= cell; });
    if (near_jump) continue;
    out.sup_error = std::max(out.sup_error, std::abs(g(1.0 - t) - fstar(t)));
    ++out.points_checked;
  }
  return out;
}

void write_rearrangement_csv(std::ostream& os, const Rearrangement& r, std::span<const double> s_grid) {
  os << "s,fstar\n" << std::setprecision(17);
  for (double s : s_grid) os << s << ',' << r(s) << '\n';
}

}  // namespace tlab
