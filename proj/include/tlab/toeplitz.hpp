#pragma once

// Toeplitz quantization T^m_f = P^m M_f P^m of a sphere symbol, written in
// the orthonormalized monomial basis w^k / sqrt(N_k), k = 0..m.

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "tlab/sphere_domain.hpp"

namespace tlab {

using ComplexMatrix = Eigen::MatrixXcd;

struct ToeplitzMatrix {
  int order = 0;  ///< m; the matrix is (m+1) x (m+1)
  ComplexMatrix entries;
  std::string symbol_name;
};

/// N_k = <w^k, w^k> = k! (m-k)! / (m+1)!, via log-gamma.
double section_norm(int m, int k);

/// Assembles T^m_f. Zonal symbols take the diagonal fast path; otherwise every
/// entry is integrated independently and Hermiticity is verified afterwards.
/// `threads` splits rows across workers without changing any bit of the result.
ToeplitzMatrix assemble(const SphereSymbol& symbol, int m, const QuadratureRule& rule, int threads = 1);

/// Convenience overload using QuadratureRule::for_rank(m).
ToeplitzMatrix assemble(const SphereSymbol& symbol, int m);

/// Diagonal of T^m_f for a zonal f, in index order:
/// lambda_k = (m+1) C(m,k) int_0^1 f(z) z^k (1-z)^(m-k) dz.
std::vector<double> zonal_eigenvalues(const SphereSymbol& symbol, int m, const QuadratureRule& rule);

/// max |A_jk - conj(A_kj)|.
double hermitian_defect(const ComplexMatrix& a);

/// Row-major text dump: a "# toeplitz symbol=<name> order=<m>" header, then one
/// line per row of space-separated "re,im" pairs at 17 significant digits.
void write_matrix(std::ostream& os, const ToeplitzMatrix& a);
ToeplitzMatrix read_matrix(std::istream& is);

}  // namespace tlab
