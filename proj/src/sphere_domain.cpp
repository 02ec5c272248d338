#include "tlab/sphere_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tlab/error.hpp"

namespace tlab {

namespace {

void require_finite(double v, double z, double theta, const std::string& name) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "symbol '" << name << "' is not finite at node (z=" << z << ", theta=" << theta << ")";
    throw DomainEvaluationError(os.str(), z, theta);
  }
}

double radial(double z) { return 2.0 * std::sqrt(std::max(0.0, z * (1.0 - z))); }
double x1(double z, double theta) { return radial(z) * std::cos(theta); }
double x2(double z, double theta) { return radial(z) * std::sin(theta); }
double x3(double z) { return 2.0 * z - 1.0; }

}  // namespace

SphereSymbol make_symbol(std::string name, SymbolFn evaluator, double sup_bound, bool zonal,
                         std::optional<int> theta_bandwidth,
                         std::optional<std::pair<double, double>> range) {
  if (!evaluator) throw ArgumentError("symbol '" + name + "' has no evaluator");
  if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound))
    throw ArgumentError("symbol '" + name + "' needs a finite sup_bound");

  constexpr int kZ = 257;
  constexpr int kT = 256;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const double slack = 1e-12 * (1.0 + sup_bound);
  for (int i = 0; i < kZ; ++i) {
    const double z = static_cast<double>(i) / (kZ - 1);
    const double ref = evaluator(z, 0.0);
    for (int t = 0; t < kT; ++t) {
      const double theta = kTwoPi * t / kT;
      const double v = evaluator(z, theta);
      if (!std::isfinite(v)) throw ArgumentError("symbol '" + name + "' is not finite on the check grid");
      if (std::abs(v) > sup_bound + slack) throw ArgumentError("symbol '" + name + "' exceeds its sup_bound");
      if (zonal && std::abs(v - ref) > slack) throw ArgumentError("symbol '" + name + "' is declared zonal but depends on theta");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }

  SphereSymbol s;
  s.name = std::move(name);
  s.evaluator = std::move(evaluator);
  s.sup_bound = sup_bound;
  s.zonal = zonal;
  s.theta_bandwidth = zonal ? std::optional<int>(0) : theta_bandwidth;
  s.min_value = range ? range->first : lo;
  s.max_value = range ? range->second : hi;
  return s;
}

SphereSymbol zonal_polynomial(std::span<const double> coeffs, std::string name) {
  if (coeffs.empty()) throw ArgumentError("zonal polynomial needs at least one coefficient");
  std::vector<double> c(coeffs.begin(), coeffs.end());
  if (name.empty()) {
    std::ostringstream os;
    os << "poly";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "_" : "-") << c[i];
    name = os.str();
  }
  double bound = 0.0;
  for (double v : c) bound += std::abs(v);
  auto eval = [c](double z, double) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
  // Dense sampling in z is enough for the range; the polynomial is theta-free.
  double lo = eval(0.0, 0.0), hi = lo;
  constexpr int kDense = 20001;
  for (int i = 1; i < kDense; ++i) {
    const double v = eval(static_cast<double>(i) / (kDense - 1), 0.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return make_symbol(std::move(name), eval, bound, true, 0, std::make_pair(lo, hi));
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("Gauss-Legendre rule needs n >= 1");
  GaussLegendre g;
  g.nodes.assign(n, 0.0);
  g.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      // p1 = P_n(x), p0 = P_{n-1}(x)
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    g.nodes[i] = -x;
    g.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  if (n == 1) g.weights[0] = 2.0;
  return g;
}

double beta_integral(int a, int b) {
  return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
}

QuadratureRule QuadratureRule::for_rank(int m) {
  if (m < 0) throw ArgumentError("rank must be >= 0");
  return QuadratureRule(2 * m + 16, 4 * m + 8, 2 * m + 4);
}

QuadratureRule::QuadratureRule(int psi_count, int theta_count, int exactness_degree)
    : theta_count_(theta_count), exactness_degree_(exactness_degree) {
  if (psi_count < 1 || theta_count < 1 || exactness_degree < 0)
    throw ConfigurationError("quadrature rule needs positive node counts");
  const auto gl = gauss_legendre(psi_count);
  psi_.resize(psi_count);
  z_.resize(psi_count);
  w_.resize(psi_count);
  double total = 0.0;
  for (int i = 0; i < psi_count; ++i) {
    const double psi = 0.25 * kPi * (gl.nodes[i] + 1.0);
    const double s = std::sin(psi);
    psi_[i] = psi;
    z_[i] = s * s;
    // dz = sin(2 psi) dpsi
    w_[i] = 0.25 * kPi * gl.weights[i] * std::sin(2.0 * psi);
    total += w_[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigurationError("quadrature mass self-test failed");
  mass_ = 0.0;
  for (auto& w : w_) {
    w /= total;
    mass_ += w;
  }

  // Beta-integral self-test, in log space so high powers stay representable.
  std::vector<double> log_z(psi_count), log_1mz(psi_count);
  for (int i = 0; i < psi_count; ++i) {
    log_z[i] = std::log(z_[i]);
    log_1mz[i] = std::log1p(-z_[i]);
  }
  for (int a = 0; a <= exactness_degree; ++a) {
    for (int b = 0; a + b <= exactness_degree; ++b) {
      const double log_exact = std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0);
      double q = 0.0;
      for (int i = 0; i < psi_count; ++i) q += w_[i] * std::exp(a * log_z[i] + b * log_1mz[i] - log_exact);
      q /= mass_;
      if (std::abs(q - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "quadrature with " << psi_count << " psi nodes fails the beta test at (a=" << a << ", b=" << b
           << "); relative error " << std::abs(q - 1.0);
        throw ConfigurationError(os.str());
      }
    }
  }
}

double integrate(const SymbolFn& fn, const QuadratureRule& rule) {
  const auto z = rule.z_nodes();
  const auto w = rule.z_weights();
  const int nt = rule.theta_count();
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double ring = 0.0;
    for (int t = 0; t < nt; ++t) {
      const double theta = rule.theta(t);
      const double v = fn(z[i], theta);
      require_finite(v, z[i], theta, "integrand");
      ring += v;
    }
    acc += w[i] * (ring / nt);
  }
  return acc / rule.mass();
}

double integrate(const SphereSymbol& symbol, const QuadratureRule& rule) {
  const auto z = rule.z_nodes();
  const auto w = rule.z_weights();
  const int nt = rule.theta_count();
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double ring = 0.0;
    for (int t = 0; t < nt; ++t) {
      const double theta = rule.theta(t);
      const double v = symbol(z[i], theta);
      require_finite(v, z[i], theta, symbol.name);
      ring += v;
    }
    acc += w[i] * (ring / nt);
  }
  return acc / rule.mass();
}

std::vector<double> project_theta_average(const SphereSymbol& symbol, std::span<const double> z_grid,
                                          const QuadratureRule& rule) {
  if (z_grid.empty()) throw ArgumentError("project_theta_average: empty z grid");
  const int nt = rule.theta_count();
  std::vector<double> out;
  out.reserve(z_grid.size());
  for (double z : z_grid) {
    if (!(z >= 0.0 && z < 1.0)) throw ArgumentError("project_theta_average: z outside [0,1)");
    double ring = 0.0;
    for (int t = 0; t < nt; ++t) {
      const double theta = rule.theta(t);
      const double v = symbol(z, theta);
      require_finite(v, z, theta, symbol.name);
      ring += v;
    }
    out.push_back(ring / nt);
  }
  return out;
}

std::vector<SphereSymbol> symbol_battery() {
  std::vector<SphereSymbol> b;
  b.push_back(make_symbol("one", [](double, double) { return 1.0; }, 1.0, true, 0, std::make_pair(1.0, 1.0)));
  b.push_back(make_symbol("x3", [](double z, double) { return x3(z); }, 1.0, true, 0, std::make_pair(-1.0, 1.0)));
  b.push_back(make_symbol("x1", [](double z, double t) { return x1(z, t); }, 1.0, false, 1,
                          std::make_pair(-1.0, 1.0)));
  b.push_back(make_symbol("x3sq", [](double z, double) { return x3(z) * x3(z); }, 1.0, true, 0,
                          std::make_pair(0.0, 1.0)));
  const double r2 = std::sqrt(2.0);
  b.push_back(make_symbol("x1px3", [](double z, double t) { return x1(z, t) + x3(z); }, r2, false, 1,
                          std::make_pair(-r2, r2)));
  // On the unit sphere x1 x2 ranges over +-(1 - x3^2)/2, so the extremes sit at the poles.
  b.push_back(make_symbol(
      "x3cpx1x2", [](double z, double t) { return x3(z) * x3(z) * x3(z) + x1(z, t) * x2(z, t); }, 1.0, false, 2,
      std::make_pair(-1.0, 1.0)));
  return b;
}

std::optional<SphereSymbol> battery_symbol(const std::string& name) {
  for (auto& s : symbol_battery())
    if (s.name == name) return s;
  return std::nullopt;
}

}  // namespace tlab
