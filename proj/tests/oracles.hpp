#pragma once

// Reference computations that share no code with the library: used to
// cross-check quadrature, eigenvalues, hull membership and assignments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// a! b! / (a+b+1)! as a running product.
inline double beta(int a, int b) {
  double r = 1.0 / (a + b + 1);
  for (int i = 1; i <= b; ++i) r *= static_cast<double>(i) / (a + i);
  return r;
}

/// int f dz dtheta / (2 pi): composite Simpson in psi (z = sin^2 psi), midpoint in theta.
inline double sphere_integral(const std::function<double(double, double)>& f, int psi_panels = 2000,
                              int theta_points = 64) {
  const double h = (kPi / 2) / psi_panels;
  double total = 0.0;
  for (int t = 0; t < theta_points; ++t) {
    const double theta = 2 * kPi * (t + 0.5) / theta_points;
    double s = 0.0;
    for (int i = 0; i <= psi_panels; ++i) {
      const double psi = i * h;
      const double sn = std::sin(psi);
      const double w = (i == 0 || i == psi_panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * f(sn * sn, theta) * std::sin(2 * psi);
    }
    total += s * h / 3.0;
  }
  return total / theta_points;
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi on its real 2n x 2n embedding,
/// sorted non-increasing.
inline std::vector<double> jacobi_eigenvalues(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  const int big = 2 * n;
  std::vector<double> s(static_cast<std::size_t>(big * big));
  auto at = [&](int i, int j) -> double& { return s[static_cast<std::size_t>(i * big + j)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      at(i, j) = a(i, j).real();
      at(i + n, j + n) = a(i, j).real();
      at(i, j + n) = -a(i, j).imag();
      at(i + n, j) = a(i, j).imag();
    }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < big; ++i)
      for (int j = 0; j < big; ++j)
        if (i != j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < big; ++p)
      for (int q = p + 1; q < big; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), sn = t * c;
        for (int k = 0; k < big; ++k) {
          const double kp = at(k, p), kq = at(k, q);
          at(k, p) = c * kp - sn * kq;
          at(k, q) = sn * kp + c * kq;
        }
        for (int k = 0; k < big; ++k) {
          const double pk = at(p, k), qk = at(q, k);
          at(p, k) = c * pk - sn * qk;
          at(q, k) = sn * pk + c * qk;
        }
      }
  }
  std::vector<double> d(static_cast<std::size_t>(big));
  for (int i = 0; i < big; ++i) d[i] = at(i, i);
  std::sort(d.begin(), d.end(), std::greater<>());
  std::vector<double> out;
  for (int i = 0; i < big; i += 2) out.push_back(0.5 * (d[i] + d[i + 1]));
  return out;
}

/// Is y a convex combination of the permutations of x? Length <= 3, by
/// barycentric feasibility over every vertex triangle (segment, point).
inline bool hull_contains(const std::vector<double>& y, const std::vector<double>& x, double tol) {
  const std::size_t n = x.size();
  const double sx = std::accumulate(x.begin(), x.end(), 0.0), sy = std::accumulate(y.begin(), y.end(), 0.0);
  if (std::abs(sx - sy) > tol) return false;
  std::vector<std::vector<double>> verts;
  std::vector<double> p(x);
  std::sort(p.begin(), p.end());
  do verts.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  if (n == 1) return std::abs(y[0] - x[0]) <= tol;
  if (n == 2) {
    const double lo = std::min(x[0], x[1]), hi = std::max(x[0], x[1]);
    return y[0] >= lo - tol && y[0] <= hi + tol;
  }
  // n == 3: coordinates (v0, v1) determine the point on the plane sum = sx.
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b)
      for (std::size_t c = b + 1; c < verts.size(); ++c) {
        const double ax = verts[a][0], ay = verts[a][1];
        const double bx = verts[b][0] - ax, by = verts[b][1] - ay;
        const double cx = verts[c][0] - ax, cy = verts[c][1] - ay;
        const double px = y[0] - ax, py = y[1] - ay;
        const double det = bx * cy - by * cx;
        if (std::abs(det) < 1e-14) {
          // Degenerate triangle: test each edge as a segment.
          auto on_segment = [&](const std::vector<double>& u, const std::vector<double>& v) {
            const double dx = v[0] - u[0], dy = v[1] - u[1];
            const double len2 = dx * dx + dy * dy;
            if (len2 == 0.0) return std::hypot(y[0] - u[0], y[1] - u[1]) <= tol;
            const double t = std::clamp(((y[0] - u[0]) * dx + (y[1] - u[1]) * dy) / len2, 0.0, 1.0);
            return std::hypot(y[0] - u[0] - t * dx, y[1] - u[1] - t * dy) <= tol;
          };
          if (on_segment(verts[a], verts[b]) || on_segment(verts[a], verts[c]) || on_segment(verts[b], verts[c]))
            return true;
          continue;
        }
        const double l1 = (px * cy - py * cx) / det, l2 = (bx * py - by * px) / det;
        if (l1 >= -tol && l2 >= -tol && l1 + l2 <= 1 + tol) return true;
      }
  return false;
}

/// Exhaustive maximum-weight assignment, lexicographically smallest optimum.
inline std::vector<int> brute_assignment(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<int> best = p;
  double best_value = -1e300;
  do {
    double v = 0.0;
    for (int k = 0; k < n; ++k) v += w(p[k], k);
    if (v > best_value + 1e-12) {
      best_value = v;
      best = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace oracle
