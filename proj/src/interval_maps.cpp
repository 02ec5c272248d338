#include "tlab/interval_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tlab/error.hpp"
#include "tlab/majorize.hpp"
#include "tlab/random.hpp"

namespace tlab {

DyadicPermutation::DyadicPermutation(std::vector<int> sigma) : sigma_(std::move(sigma)) {
  if (sigma_.empty()) throw ArgumentError("permutation must have at least one element");
  std::vector<char> seen(sigma_.size(), 0);
  for (int v : sigma_) {
    if (v < 0 || v >= static_cast<int>(sigma_.size()) || seen[static_cast<std::size_t>(v)])
      throw ArgumentError("sigma is not a bijection of {0..m}");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

DyadicPermutation DyadicPermutation::identity(int m) {
  std::vector<int> s(static_cast<std::size_t>(m) + 1);
  std::iota(s.begin(), s.end(), 0);
  return DyadicPermutation(std::move(s));
}

DyadicPermutation DyadicPermutation::cyclic_shift(int m, int shift) {
  const int n = m + 1;
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s[k] = ((k + shift) % n + n) % n;
  return DyadicPermutation(std::move(s));
}

DyadicPermutation DyadicPermutation::compose(const DyadicPermutation& q) const {
  if (q.sigma_.size() != sigma_.size()) throw ArgumentError("compose: ranks differ");
  std::vector<int> s(sigma_.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = sigma_[static_cast<std::size_t>(q.sigma_[k])];
  return DyadicPermutation(std::move(s));
}

DyadicPermutation DyadicPermutation::refine(int factor) const {
  if (factor < 1) throw ArgumentError("refine: factor must be positive");
  std::vector<int> s;
  s.reserve(sigma_.size() * static_cast<std::size_t>(factor));
  for (int v : sigma_)
    for (int i = 0; i < factor; ++i) s.push_back(v * factor + i);
  return DyadicPermutation(std::move(s));
}

double apply_dyadic(const DyadicPermutation& p, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw ArgumentError("apply_dyadic: x outside [0,1)");
  const int n = p.rank() + 1;
  const int k = std::min(n - 1, static_cast<int>(std::floor(x * n)));
  return x + static_cast<double>(p[k] - k) / n;
}

MeasurePreservingMap identity_map() {
  return {"identity", [](double x) { return x; }, true, std::vector<AffinePiece>{{0.0, 1.0, 1.0, 0.0}}};
}

MeasurePreservingMap rotation_map(double alpha) {
  alpha -= std::floor(alpha);
  std::ostringstream name;
  name.precision(17);
  name << "rotation:" << alpha;
  std::vector<AffinePiece> pieces;
  if (alpha == 0.0) {
    pieces.push_back({0.0, 1.0, 1.0, 0.0});
  } else {
    pieces.push_back({0.0, 1.0 - alpha, 1.0, alpha});
    pieces.push_back({1.0 - alpha, 1.0, 1.0, alpha - 1.0});
  }
  return {name.str(),
          [alpha](double x) {
            const double y = x + alpha;
            return y >= 1.0 ? y - 1.0 : y;
          },
          true, std::move(pieces)};
}

MeasurePreservingMap doubling_map() {
  return {"doubling",
          [](double x) {
            const double y = 2.0 * x;
            return y >= 1.0 ? y - 1.0 : y;
          },
          false, std::vector<AffinePiece>{{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, 2.0, -1.0}}};
}

MeasurePreservingMap baker_map() {
  return {"baker",
          [](double x) {
            const double y = x < 0.5 ? 2.0 * x : 2.0 - 2.0 * x;
            return y < 1.0 ? y : 0.0;
          },
          false, std::vector<AffinePiece>{{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, -2.0, 2.0}}};
}

MeasurePreservingMap as_map(const DyadicPermutation& p) {
  const int n = p.rank() + 1;
  std::vector<AffinePiece> pieces;
  for (int k = 0; k < n; ++k)
    pieces.push_back({static_cast<double>(k) / n, static_cast<double>(k + 1) / n, 1.0,
                      static_cast<double>(p[k] - k) / n});
  return {"dyadic:" + std::to_string(p.rank()),
          [p](double x) { return apply_dyadic(p, std::clamp(x, 0.0, std::nextafter(1.0, 0.0))); }, true,
          std::move(pieces)};
}

MeasurePreservingMap map_by_name(const std::string& spec) {
  if (spec == "identity") return identity_map();
  if (spec == "doubling") return doubling_map();
  if (spec == "baker") return baker_map();
  if (spec.rfind("rotation:", 0) == 0) {
    const std::string arg = spec.substr(9);
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty() || !std::isfinite(alpha))
      throw ArgumentError("bad rotation angle in map '" + spec + "'");
    return rotation_map(alpha);
  }
  throw ArgumentError("unknown map '" + spec + "' (expected identity, rotation:<float>, doubling, baker)");
}

HistogramCheck histogram_check(const MeasurePreservingMap& phi, int points, int bins, double delta) {
  constexpr double kGolden = 0.61803398874989484820;
  HistogramCheck h;
  h.bin_mass.assign(static_cast<std::size_t>(bins), 0.0);
  for (int i = 0; i < points; ++i) {
    double x = (i + 0.5) * kGolden;
    x -= std::floor(x);
    const double y = phi(x);
    const int b = std::clamp(static_cast<int>(std::floor(y * bins)), 0, bins - 1);
    h.bin_mass[static_cast<std::size_t>(b)] += 1.0 / points;
  }
  for (double m : h.bin_mass) h.worst_deviation = std::max(h.worst_deviation, std::abs(m - 1.0 / bins));
  h.passes = h.worst_deviation <= delta;
  return h;
}

TransportMatrix transport_matrix(const MeasurePreservingMap& phi, int m, long samples_per_cell, std::uint64_t seed) {
  if (m < 0) throw ArgumentError("transport_matrix: rank must be >= 0");
  if (!histogram_check(phi).passes)
    throw InputError("transport_matrix: map '" + phi.name + "' fails the measure-preservation histogram");
  const int n = m + 1;
  TransportMatrix t;
  t.rank = m;
  t.entries = Eigen::MatrixXd::Zero(n, n);

  if (phi.pieces) {
    t.analytic = true;
    for (const auto& pc : *phi.pieces) {
      for (int k = 0; k < n; ++k) {
        const double a = std::max(pc.lo, static_cast<double>(k) / n);
        const double b = std::min(pc.hi, static_cast<double>(k + 1) / n);
        if (!(b > a)) continue;
        double ya = pc.slope * a + pc.offset, yb = pc.slope * b + pc.offset;
        if (ya > yb) std::swap(ya, yb);
        const int j_lo = std::clamp(static_cast<int>(std::floor(ya * n)), 0, n - 1);
        const int j_hi = std::clamp(static_cast<int>(std::ceil(yb * n)) - 1, 0, n - 1);
        for (int j = j_lo; j <= j_hi; ++j) {
          const double lo = std::max(ya, static_cast<double>(j) / n);
          const double hi = std::min(yb, static_cast<double>(j + 1) / n);
          if (hi > lo) t.entries(j, k) += n * (hi - lo) / std::abs(pc.slope);
        }
      }
    }
  } else {
    if (samples_per_cell < 1) throw ArgumentError("transport_matrix: need samples");
    for (int k = 0; k < n; ++k) {
      Rng rng(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(k + 1));
      std::vector<long> counts(static_cast<std::size_t>(n), 0);
      for (long s = 0; s < samples_per_cell; ++s) {
        const double x = (k + rng.uniform()) / n;
        const int j = std::clamp(static_cast<int>(std::floor(phi(x) * n)), 0, n - 1);
        ++counts[static_cast<std::size_t>(j)];
      }
      for (int j = 0; j < n; ++j)
        t.entries(j, k) = static_cast<double>(counts[static_cast<std::size_t>(j)]) / samples_per_cell;
    }
  }
  for (int i = 0; i < n; ++i) {
    t.max_marginal_deviation = std::max(t.max_marginal_deviation, std::abs(t.entries.row(i).sum() - 1.0));
    t.max_marginal_deviation = std::max(t.max_marginal_deviation, std::abs(t.entries.col(i).sum() - 1.0));
  }
  return t;
}

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
  const int n = static_cast<int>(weights.rows());
  if (n == 0 || weights.cols() != n) throw ArgumentError("assignment needs a non-empty square matrix");
  // Rows are sources k, columns targets j; cost(k, j) = -weights(j, k).
  auto cost = [&](int k, int j) { return -weights(j, k); };

  // Hungarian method with potentials, 1-based bookkeeping.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n), col_to_row(n);
  for (int j = 1; j <= n; ++j) {
    row_to_col[p[j] - 1] = j - 1;
    col_to_row[j - 1] = p[j] - 1;
  }

  // Every optimal assignment lives on the tight edges of the optimal duals; walk rows
  // in order and move each to its smallest tight column reachable by an alternating cycle.
  const double eps = 1e-9 * (1.0 + weights.cwiseAbs().maxCoeff());
  std::vector<std::vector<int>> tight(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      if (cost(k, j) - u[k + 1] - v[j + 1] <= eps) tight[k].push_back(j);

  std::vector<char> col_fixed(n, 0);
  std::vector<int> parent(n);
  std::vector<char> seen(n);
  for (int k = 0; k < n; ++k) {
    const int current = row_to_col[k];
    for (int j : tight[k]) {
      if (j >= current) break;
      if (col_fixed[j]) continue;
      // k takes j, so j's row must move; search for an alternating path that
      // ends with some row taking `current`, which k releases.
      const int start_row = col_to_row[j];
      std::fill(seen.begin(), seen.end(), 0);
      std::vector<int> queue{start_row};
      seen[start_row] = 1;
      int end_row = -1;
      for (std::size_t head = 0; head < queue.size() && end_row < 0; ++head) {
        const int r = queue[head];
        for (int c : tight[r]) {
          if (col_fixed[c] || c == j || c == row_to_col[r]) continue;
          if (c == current) {
            end_row = r;
            break;
          }
          const int r2 = col_to_row[c];
          if (seen[r2]) continue;
          seen[r2] = 1;
          parent[r2] = r;  // r takes r2's column
          queue.push_back(r2);
        }
      }
      if (end_row < 0) continue;
      int r = end_row;
      int take = current;
      while (true) {
        const int released = row_to_col[r];
        row_to_col[r] = take;
        col_to_row[take] = r;
        if (r == start_row) break;
        take = released;
        r = parent[r];
      }
      row_to_col[k] = j;
      col_to_row[j] = k;
      break;
    }
    col_fixed[row_to_col[k]] = 1;
  }
  return row_to_col;
}

DyadicPermutation best_dyadic_approximation(const MeasurePreservingMap& phi, int m) {
  const auto t = transport_matrix(phi, m);
  return DyadicPermutation(max_weight_assignment(t.entries));
}

double sot_distance(const MeasurePreservingMap& s, const MeasurePreservingMap& t,
                    const std::function<double(double)>& g, int grid) {
  if (grid < 1) throw ArgumentError("sot_distance: grid must be positive");
  double acc = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    const double d = g(s(x)) - g(t(x));
    acc += d * d;
  }
  return std::sqrt(acc / grid);
}

double sot_distance(const MeasurePreservingMap& s, const MeasurePreservingMap& t, const StepFunction& g, int grid) {
  return sot_distance(s, t, [&g](double x) { return g(x); }, grid);
}

StepFunction compose_step(const StepFunction& g, const DyadicPermutation& p) {
  const long a = g.pieces(), b = p.rank() + 1;
  const long pieces = std::lcm(a, b);
  if (pieces > kMaxRefinement) throw ArgumentError("compose_step: common refinement exceeds the piece cap");
  const auto perm = pieces == b ? p : p.refine(static_cast<int>(pieces / b));
  std::vector<double> refined;
  refined.reserve(static_cast<std::size_t>(pieces));
  const long rep = pieces / a;
  for (double v : g.values())
    for (long i = 0; i < rep; ++i) refined.push_back(v);
  std::vector<double> out(refined.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = refined[static_cast<std::size_t>(perm[static_cast<int>(k)])];
  return StepFunction(std::move(out));
}

std::string serialize_permutation(const DyadicPermutation& p) {
  std::ostringstream os;
  for (std::size_t k = 0; k < p.sigma().size(); ++k) os << (k ? " " : "") << p.sigma()[k];
  return os.str();
}

DyadicPermutation parse_permutation(const std::string& text) {
  std::istringstream is(text);
  std::vector<int> s;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ArgumentError("permutation: '" + tok + "' is not an integer");
    s.push_back(v);
  }
  return DyadicPermutation(std::move(s));
}

}  // namespace tlab
