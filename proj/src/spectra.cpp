#include "tlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "tlab/error.hpp"

namespace tlab {

StepFunction::StepFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ArgumentError("step function needs at least one piece");
}

double StepFunction::operator()(double x) const {
  const int n = pieces();
  auto k = static_cast<long>(std::floor(x * n));
  k = std::clamp<long>(k, 0, n - 1);
  return values_[static_cast<std::size_t>(k)];
}

double StepFunction::l2_norm_squared() const {
  double acc = 0.0;
  for (double v : values_) acc += v * v;
  return acc / pieces();
}

Spectrum eigenvalues(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InputError("eigenvalues: need a non-empty square matrix");
  const double scale = a.cwiseAbs().maxCoeff();
  const double defect = hermitian_defect(a);
  if (defect > 1e-12 * (1.0 + scale)) throw InputError("eigenvalues: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  const double norm = a.norm();
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalues: tridiagonal QL iteration did not converge", norm);

  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double r = (a * vecs.col(i) - vals(i) * vecs.col(i)).norm();
    worst = std::max(worst, r);
  }
  if (worst > tol * std::max(norm, std::numeric_limits<double>::min()) && worst > 0.0)
    throw NumericalError("eigenvalues: residual above tolerance", worst);

  Spectrum s;
  s.order = static_cast<int>(a.rows()) - 1;
  s.values.assign(vals.data(), vals.data() + vals.size());
  std::stable_sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

Spectrum eigenvalues(const ToeplitzMatrix& a, double tol) { return eigenvalues(a.entries, tol); }

StepFunction lambda_step(const Spectrum& s) { return StepFunction(s.values); }

double szego_error(const Spectrum& s, const SphereSymbol& symbol, const std::function<double(double)>& phi,
                   const QuadratureRule& rule) {
  double acc = 0.0;
  for (double l : s.values) acc += phi(l);
  const double lhs = acc / static_cast<double>(s.values.size());
  const double rhs = integrate([&](double z, double t) { return phi(symbol(z, t)); }, rule);
  return std::abs(lhs - rhs);
}

void write_spectra_csv(std::ostream& os, const std::vector<Spectrum>& spectra) {
  os << "m,k,lambda\n" << std::setprecision(17);
  for (const auto& s : spectra)
    for (std::size_t k = 0; k < s.values.size(); ++k) os << s.order << ',' << k << ',' << s.values[k] << '\n';
}

void write_szego_csv(std::ostream& os, const std::vector<SzegoRow>& rows) {
  os << "m,phi,error\n" << std::setprecision(17);
  for (const auto& r : rows) os << r.m << ',' << r.phi << ',' << r.error << '\n';
}

}  // namespace tlab
