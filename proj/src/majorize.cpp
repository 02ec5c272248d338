#include "tlab/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tlab/error.hpp"
#include "tlab/random.hpp"

namespace tlab {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      c_ += (sum_ - t) + v;
    else
      c_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

std::vector<double> sorted_desc(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Prefix slacks of already-sorted vectors, each prefix sum multiplied by `unit`.
MajorizationCertificate certify_sorted(const std::vector<double>& xs, const std::vector<double>& ys, double unit,
                                       double tol) {
  MajorizationCertificate c;
  c.slacks.resize(xs.size());
  CompensatedSum sx, sy;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx.add(xs[k]);
    sy.add(ys[k]);
    c.slacks[k] = (sx.value() - sy.value()) * unit;
  }
  c.total_residual = std::abs(c.slacks.back());
  c.holds = c.min_slack() >= -tol && c.total_residual <= tol;
  return c;
}

long long factorial_capped(int n, long long cap) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) {
    if (f > cap / i) return cap;
    f *= i;
  }
  return std::min(f, cap);
}

}  // namespace

double MajorizationCertificate::min_slack() const {
  return slacks.empty() ? 0.0 : *std::min_element(slacks.begin(), slacks.end());
}

long MajorizationCertificate::first_violation(double tol) const {
  for (std::size_t k = 0; k < slacks.size(); ++k)
    if (slacks[k] < -tol) return static_cast<long>(k);
  if (total_residual > tol) return static_cast<long>(slacks.size()) - 1;
  return -1;
}

double default_tolerance(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return 1e-9 * (1.0 + m);
}

MajorizationCertificate majorizes(std::span<const double> x, std::span<const double> y, double tol) {
  if (x.empty() || x.size() != y.size()) throw ArgumentError("majorizes: vectors must have equal non-zero length");
  return certify_sorted(sorted_desc(x), sorted_desc(y), 1.0, tol);
}

MajorizationCertificate schur_check(const ComplexMatrix& a, const Spectrum& s, double tol) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != s.values.size())
    throw ArgumentError("schur_check: matrix and spectrum sizes differ");
  std::vector<double> diag(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (std::abs(a(i, i).imag()) > tol) throw InputError("schur_check: diagonal is not real, matrix not Hermitian");
    diag[static_cast<std::size_t>(i)] = a(i, i).real();
  }
  return majorizes(s.values, diag, tol);
}

bool rado_membership(std::span<const double> y, std::span<const double> x, double tol) {
  return majorizes(x, y, tol).holds;
}

double convex_function_test(std::span<const double> x, std::span<const double> y,
                            const std::vector<std::function<double(double)>>& phis) {
  if (x.size() != y.size()) throw ArgumentError("convex_function_test: length mismatch");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& phi : phis) {
    CompensatedSum sy, sx;
    for (double v : y) sy.add(phi(v));
    for (double v : x) sx.add(phi(v));
    worst = std::max(worst, sy.value() - sx.value());
  }
  return worst;
}

ComplexMatrix horn_construct(std::span<const double> lambda, std::span<const double> d, double tol) {
  const auto cert = majorizes(lambda, d, tol);
  if (!cert.holds) {
    const long k = cert.first_violation(tol);
    std::ostringstream os;
    os << "horn_construct: diagonal is not majorized by the spectrum (prefix " << k << ")";
    throw PreconditionError(os.str(), k);
  }
  const int n = static_cast<int>(lambda.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> diag(lambda.begin(), lambda.end());
  for (int i = 0; i < n; ++i) a(i, i) = diag[i];

  // Targets are consumed largest first; target_of[i] is the d-position pinned at index i.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int p, int q) { return d[p] > d[q]; });
  std::vector<int> target_of(n, -1);
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);

  for (int step = 0; step + 1 < n; ++step) {
    const int q = order[step];
    const double t = d[q];
    int above = -1, below = -1, exact = -1;
    for (int i : active) {
      if (std::abs(diag[i] - t) <= tol && exact < 0) exact = i;
      if (diag[i] >= t && (above < 0 || diag[i] < diag[above])) above = i;
      if (diag[i] <= t && (below < 0 || diag[i] > diag[below])) below = i;
    }
    int pinned;
    if (exact >= 0) {
      pinned = exact;
    } else {
      // Rounding can push t just outside the active range; fall back to the extremes.
      if (above < 0 || below < 0) {
        above = below = active.front();
        for (int i : active) {
          if (diag[i] > diag[above]) above = i;
          if (diag[i] < diag[below]) below = i;
        }
      }
      const double span = diag[above] - diag[below];
      const double c2 = span > 0.0 ? std::clamp((t - diag[below]) / span, 0.0, 1.0) : 1.0;
      const double c = std::sqrt(c2), s = std::sqrt(1.0 - c2);
      // Rotate the (above, below) plane: e_above' = c e_above + s e_below.
      const int p = above, r = below;
      for (int l = 0; l < n; ++l) {
        const double ap = a(l, p), ar = a(l, r);
        a(l, p) = c * ap + s * ar;
        a(l, r) = -s * ap + c * ar;
      }
      for (int l = 0; l < n; ++l) {
        const double ap = a(p, l), ar = a(r, l);
        a(p, l) = c * ap + s * ar;
        a(r, l) = -s * ap + c * ar;
      }
      diag[p] = a(p, p);
      diag[r] = a(r, r);
      pinned = p;
    }
    target_of[pinned] = q;
    active.erase(std::find(active.begin(), active.end(), pinned));
  }
  target_of[active.front()] = order[n - 1];

  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(target_of[i], target_of[j]) = a(i, j);
  return out;
}

std::vector<std::vector<double>> sample_hull(std::span<const double> lambda, int n, std::uint64_t seed, int n_perm) {
  if (n < 1) throw ArgumentError("sample_hull: need n >= 1");
  if (n_perm < 1) throw ArgumentError("sample_hull: need n_perm >= 1");
  const int len = static_cast<int>(lambda.size());
  const int r = static_cast<int>(factorial_capped(len, n_perm));
  Rng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (int s = 0; s < n; ++s) {
    std::vector<double> w(r);
    double total = 0.0;
    for (auto& v : w) total += (v = rng.exponential());
    std::vector<double> point(len, 0.0);
    for (int i = 0; i < r; ++i) {
      const auto perm = rng.permutation(len);
      const double wi = w[i] / total;
      for (int j = 0; j < len; ++j) point[j] += wi * lambda[perm[j]];
    }
    out.push_back(std::move(point));
  }
  return out;
}

MajorizationCertificate step_majorizes(const StepFunction& f, const StepFunction& g, double tol) {
  const long a = f.pieces(), b = g.pieces();
  const long pieces = std::lcm(a, b);
  if (pieces > kMaxRefinement) throw ArgumentError("step_majorizes: common refinement exceeds the piece cap");
  auto refine = [pieces](const StepFunction& h) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(pieces));
    const long rep = pieces / h.pieces();
    for (double v : h.values())
      for (long i = 0; i < rep; ++i) out.push_back(v);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  };
  return certify_sorted(refine(f), refine(g), 1.0 / static_cast<double>(pieces), tol);
}

namespace {
void check_grid(std::span<const double> s_grid) {
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0 && s_grid[i] <= 1.0)) throw ArgumentError("cumulative_rearranged: grid outside (0,1]");
    if (i && s_grid[i] < s_grid[i - 1]) throw ArgumentError("cumulative_rearranged: grid not sorted");
  }
}

// Composite 4-point Gauss-Legendre on `panels` uniform panels over [0, 1].
std::vector<double> composite_cumulative(const Rearrangement& f, std::span<const double> s_grid, int panels) {
  static const double xs[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static const double ws[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  auto integrate = [&](double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += ws[i] * f(mid + half * xs[i]);
    return acc * half;
  };
  const double h = 1.0 / panels;
  std::vector<double> panel_end(panels + 1, 0.0);
  for (int p = 0; p < panels; ++p) panel_end[p + 1] = panel_end[p] + integrate(p * h, (p + 1) * h);
  std::vector<double> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    const int p = std::min(panels - 1, static_cast<int>(std::floor(s / h)));
    out.push_back(panel_end[p] + integrate(p * h, s));
  }
  return out;
}
}  // namespace

CumulativeCurve cumulative_rearranged(const StepFunction& f, std::span<const double> s_grid) {
  return cumulative_rearranged(rearrange_function(f), s_grid);
}

CumulativeCurve cumulative_rearranged(const Rearrangement& f, std::span<const double> s_grid) {
  check_grid(s_grid);
  CumulativeCurve c;
  if (f.is_step()) {
    c.values.reserve(s_grid.size());
    for (double s : s_grid) c.values.push_back(f.step_cumulative(s));
    return c;
  }
  constexpr int kPanels = 4096;
  c.values = composite_cumulative(f, s_grid, kPanels);
  const auto coarse = composite_cumulative(f, s_grid, kPanels / 2);
  for (std::size_t i = 0; i < coarse.size(); ++i)
    c.tolerance = std::max(c.tolerance, std::abs(coarse[i] - c.values[i]));
  return c;
}

void write_certificate_csv(std::ostream& os, const MajorizationCertificate& c) {
  os << "prefix,slack\n";
  os.precision(17);
  for (std::size_t k = 0; k < c.slacks.size(); ++k) os << k << ',' << c.slacks[k] << '\n';
  os << "holds," << (c.holds ? "true" : "false") << '\n';
}

}  // namespace tlab
