#include "tlab/toeplitz.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "tlab/error.hpp"

namespace tlab {

namespace {

double log_section_norm(int m, int k) {
  return std::lgamma(k + 1.0) + std::lgamma(m - k + 1.0) - std::lgamma(m + 2.0);
}

void check_rule(int m, const QuadratureRule& rule, const SphereSymbol& symbol) {
  if (rule.psi_count() < 2 * m + 16) {
    std::ostringstream os;
    os << "rank " << m << " needs at least " << 2 * m + 16 << " psi nodes, rule has " << rule.psi_count();
    throw ConfigurationError(os.str());
  }
  const int band = symbol.theta_bandwidth.value_or(m + 8);
  if (!symbol.zonal && rule.theta_count() <= m + band) {
    std::ostringstream os;
    os << "rank " << m << " needs more than " << m + band << " theta nodes, rule has " << rule.theta_count();
    throw ConfigurationError(os.str());
  }
  // Self-test: the rule must reproduce every N_k.
  const auto psi = rule.psi_nodes();
  const auto w = rule.z_weights();
  for (int k = 0; k <= m; ++k) {
    const double log_nk = log_section_norm(m, k);
    double q = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
      q += w[i] * std::exp(2.0 * k * std::log(std::sin(psi[i])) + 2.0 * (m - k) * std::log(std::cos(psi[i])) - log_nk);
    q /= rule.mass();
    if (std::abs(q - 1.0) > 1e-10) {
      std::ostringstream os;
      os << "quadrature cannot reproduce section norm N_" << k << " at rank " << m;
      throw ConfigurationError(os.str());
    }
  }
}

template <class Fn>
void for_rows(int rows, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, rows));
  if (threads == 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int r = t; r < rows; r += threads) fn(r);
    });
}

}  // namespace

double section_norm(int m, int k) {
  if (m < 0 || k < 0 || k > m) throw ArgumentError("section_norm: need 0 <= k <= m");
  return std::exp(log_section_norm(m, k));
}

std::vector<double> zonal_eigenvalues(const SphereSymbol& symbol, int m, const QuadratureRule& rule) {
  if (!symbol.zonal) throw ArgumentError("zonal_eigenvalues: symbol '" + symbol.name + "' is not zonal");
  if (m < 0) throw ArgumentError("zonal_eigenvalues: rank must be >= 0");
  const auto psi = rule.psi_nodes();
  const auto z = rule.z_nodes();
  const auto w = rule.z_weights();
  std::vector<double> fz(psi.size()), log_s(psi.size()), log_c(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    fz[i] = symbol(z[i], 0.0);
    if (!std::isfinite(fz[i]))
      throw DomainEvaluationError("symbol '" + symbol.name + "' is not finite at a radial node", z[i], 0.0);
    log_s[i] = std::log(std::sin(psi[i]));
    log_c[i] = std::log(std::cos(psi[i]));
  }
  std::vector<double> out(m + 1);
  for (int k = 0; k <= m; ++k) {
    const double log_nk = log_section_norm(m, k);
    // Normalizing by the rule's own N_k makes constants quantize to exact scalars.
    double acc = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double b = w[i] * std::exp(2.0 * k * log_s[i] + 2.0 * (m - k) * log_c[i] - log_nk);
      acc += b * fz[i];
      norm += b;
    }
    out[k] = acc / norm;
  }
  return out;
}

double hermitian_defect(const ComplexMatrix& a) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k) worst = std::max(worst, std::abs(a(j, k) - std::conj(a(k, j))));
  return worst;
}

ToeplitzMatrix assemble(const SphereSymbol& symbol, int m) {
  return assemble(symbol, m, QuadratureRule::for_rank(m));
}

ToeplitzMatrix assemble(const SphereSymbol& symbol, int m, const QuadratureRule& rule, int threads) {
  if (m < 0) throw ArgumentError("assemble: rank must be >= 0");
  check_rule(m, rule, symbol);

  ToeplitzMatrix out;
  out.order = m;
  out.symbol_name = symbol.name;
  out.entries = ComplexMatrix::Zero(m + 1, m + 1);

  if (symbol.zonal) {
    const auto diag = zonal_eigenvalues(symbol, m, rule);
    for (int k = 0; k <= m; ++k) out.entries(k, k) = diag[k];
    return out;
  }

  const auto psi = rule.psi_nodes();
  const auto z = rule.z_nodes();
  const auto w = rule.z_weights();
  const int np = static_cast<int>(psi.size());
  const int nt = rule.theta_count();
  const int band = std::min(m, symbol.theta_bandwidth.value_or(m));

  std::vector<double> samples(static_cast<std::size_t>(np) * nt);
  for (int i = 0; i < np; ++i)
    for (int t = 0; t < nt; ++t) {
      const double v = symbol(z[i], rule.theta(t));
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "symbol '" << symbol.name << "' is not finite at node (z=" << z[i] << ", theta=" << rule.theta(t) << ")";
        throw DomainEvaluationError(os.str(), z[i], rule.theta(t));
      }
      samples[static_cast<std::size_t>(i) * nt + t] = v;
    }

  std::vector<double> cos_table(nt), sin_table(nt);
  for (int t = 0; t < nt; ++t) {
    cos_table[t] = std::cos(rule.theta(t));
    sin_table[t] = std::sin(rule.theta(t));
  }

  // fourier[(n + band) * np + i] = (1/T) sum_t f(z_i, theta_t) e^{i n theta_t}
  const int modes = 2 * band + 1;
  std::vector<std::complex<double>> fourier(static_cast<std::size_t>(modes) * np);
  for (int n = -band; n <= band; ++n) {
    for (int i = 0; i < np; ++i) {
      double re = 0.0, im = 0.0;
      const double* row = &samples[static_cast<std::size_t>(i) * nt];
      for (int t = 0; t < nt; ++t) {
        const long idx = ((static_cast<long>(n) * t) % nt + nt) % nt;
        re += row[t] * cos_table[idx];
        im += row[t] * sin_table[idx];
      }
      fourier[static_cast<std::size_t>(n + band) * np + i] = {re / nt, im / nt};
    }
  }

  std::vector<double> log_s(np), log_c(np), wn(np);
  for (int i = 0; i < np; ++i) {
    log_s[i] = std::log(std::sin(psi[i]));
    log_c[i] = std::log(std::cos(psi[i]));
    wn[i] = w[i] / rule.mass();
  }
  std::vector<double> log_norm(m + 1);
  for (int k = 0; k <= m; ++k) log_norm[k] = log_section_norm(m, k);

  for_rows(m + 1, threads, [&](int j) {
    for (int k = 0; k <= m; ++k) {
      const int n = k - j;
      if (std::abs(n) > band) continue;  // exact zero beyond the theta bandwidth
      const double log_coef = -0.5 * (log_norm[j] + log_norm[k]);
      const std::complex<double>* fc = &fourier[static_cast<std::size_t>(n + band) * np];
      std::complex<double> acc = 0.0;
      for (int i = 0; i < np; ++i) {
        const double radial = std::exp(log_coef + (j + k) * log_s[i] + (2 * m - j - k) * log_c[i]);
        acc += (wn[i] * radial) * fc[i];
      }
      out.entries(j, k) = acc;
    }
  });

  const double scale = 1.0 + out.entries.cwiseAbs().maxCoeff();
  const double defect = hermitian_defect(out.entries);
  if (defect > 1e-12 * scale)
    throw NumericalError("assembled matrix for '" + symbol.name + "' fails the Hermitian self-check", defect);
  return out;
}

void write_matrix(std::ostream& os, const ToeplitzMatrix& a) {
  os << "# toeplitz symbol=" << a.symbol_name << " order=" << a.order << '\n';
  os << std::setprecision(17);
  for (Eigen::Index j = 0; j < a.entries.rows(); ++j) {
    for (Eigen::Index k = 0; k < a.entries.cols(); ++k) {
      if (k) os << ' ';
      os << a.entries(j, k).real() << ',' << a.entries(j, k).imag();
    }
    os << '\n';
  }
}

ToeplitzMatrix read_matrix(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# toeplitz ", 0) != 0)
    throw InputError("matrix dump: missing '# toeplitz' header");
  ToeplitzMatrix a;
  std::istringstream hs(header.substr(11));
  std::string field;
  while (hs >> field) {
    if (field.rfind("symbol=", 0) == 0) a.symbol_name = field.substr(7);
    else if (field.rfind("order=", 0) == 0) a.order = std::stoi(field.substr(6));
  }
  const int n = a.order + 1;
  a.entries = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    std::string line;
    if (!std::getline(is, line)) throw InputError("matrix dump: truncated");
    std::istringstream ls(line);
    for (int k = 0; k < n; ++k) {
      std::string pair;
      if (!(ls >> pair)) throw InputError("matrix dump: short row");
      const auto comma = pair.find(',');
      if (comma == std::string::npos) throw InputError("matrix dump: entry without comma");
      a.entries(j, k) = {std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))};
    }
  }
  return a;
}

}  // namespace tlab
