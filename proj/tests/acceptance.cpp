// Acceptance gate: one line per criterion, non-zero exit if any fails.
// Usage: acceptance [scratch_dir]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tlab/cli.hpp"
#include "tlab/limsup.hpp"
#include "tlab/random.hpp"

using namespace tlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> midpoints(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = (i + 0.5) / n;
  return g;
}

Outcome zonal_closed_form() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> coeffs = {0.0, 1.0};
  const auto f = zonal_polynomial(coeffs, "z");
  double worst = 0.0;
  for (int m = 1; m <= 64; ++m) {
    const auto t = assemble(f, m);
    for (int k = 0; k <= m; ++k)
      worst = std::max(worst, std::abs(t.entries(k, k).real() - static_cast<double>(k + 1) / (m + 2)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 5.0, "max err " + num(worst) + ", " + num(secs) + " s"};
}

Outcome coordinate_spectra() {
  double closed = 0.0, iso = 0.0;
  for (int m = 0; m <= 16; ++m) {
    const auto s1 = eigenvalues(assemble(*battery_symbol("x1"), m));
    const auto s3 = eigenvalues(assemble(*battery_symbol("x3"), m));
    for (int k = 0; k <= m; ++k) {
      closed = std::max(closed, std::abs(s1.values[k] - static_cast<double>(m - 2 * k) / (m + 2)));
      iso = std::max(iso, std::abs(s1.values[k] - s3.values[k]));
    }
  }
  return {closed <= 1e-8 && iso <= 1e-8, "closed-form err " + num(closed) + ", x1 vs x3 " + num(iso)};
}

// Criteria 3 and 4 share the assembled battery.
struct BatterySweep {
  double trace_ratio = 0.0;     // worst |trace - (m+1) int f| / ((m+1) sup)
  double containment = 0.0;     // worst excursion outside [min f, max f]
};

const BatterySweep& battery_sweep() {
  static const BatterySweep sweep = [] {
    BatterySweep s;
    for (const auto& sym : symbol_battery())
      for (int m = 0; m <= 64; ++m) {
        const auto rule = QuadratureRule::for_rank(m);
        const auto t = assemble(sym, m, rule);
        const double trace = t.entries.trace().real();
        s.trace_ratio = std::max(s.trace_ratio, std::abs(trace - (m + 1) * integrate(sym, rule)) /
                                                    ((m + 1) * sym.sup_bound));
        const auto sp = eigenvalues(t);
        s.containment = std::max({s.containment, sp.values.front() - sym.max_value, sym.min_value - sp.values.back()});
      }
    return s;
  }();
  return sweep;
}

Outcome trace_identity() {
  const double r = battery_sweep().trace_ratio;
  return {r <= 1e-8, "worst error / ((m+1) sup) " + num(r)};
}

Outcome spectrum_containment() {
  const double c = battery_sweep().containment;
  return {c <= 1e-8, "worst excursion " + num(c)};
}

Outcome szego_convergence() {
  const std::vector<int> ranks = {8, 16, 32, 64};
  std::vector<std::string> bad;
  for (const auto& sym : symbol_battery()) {
    const auto out = szego_experiment(sym, ranks);
    std::map<std::string, std::vector<double>> series;
    for (const auto& row : out.rows) series[row.phi].push_back(row.error);
    const double b = std::max(1.0, sym.sup_bound);
    for (const auto& [phi, e] : series)
      if (!decreasing_trend(e, 1, 1e-12 * b * b * b)) bad.push_back(sym.name + "/" + phi);
  }
  // Hand value: lambda = (1/2, 0, -1/2), int (2z-1)^2 = 4B(2,0) - 4B(1,0) + B(0,0).
  const auto x3 = *battery_symbol("x3");
  const auto rule = QuadratureRule::for_rank(2);
  const double mean_sq = (0.25 + 0.0 + 0.25) / 3;
  const double integral = 4 * oracle::beta(2, 0) - 4 * oracle::beta(1, 0) + oracle::beta(0, 0);
  const double hand = std::abs(mean_sq - integral);
  const double got = szego_error(eigenvalues(assemble(x3, 2, rule)), x3, [](double t) { return t * t; }, rule);
  const bool exact = std::abs(got - hand) <= 1e-10 && std::abs(hand - 1.0 / 6) <= 1e-15;
  std::string detail = "m=2 x3 t^2 error " + num(got);
  if (!bad.empty()) {
    detail += "; trend failed:";
    for (const auto& s : bad) detail += " " + s;
  }
  return {bad.empty() && exact, detail};
}

Outcome lambda_to_fstar() {
  const auto grid = midpoints(1000);
  bool x3_ok = true;
  double worst_ratio = 0.0;
  for (int m : {8, 16, 32, 64, 128}) {
    const auto lam = lambda_step(eigenvalues(assemble(*battery_symbol("x3"), m)));
    double sup = 0.0;
    for (double s : grid) sup = std::max(sup, std::abs(lam(s) - (1 - 2 * s)));
    x3_ok = x3_ok && sup <= 2.0 / (m + 2);
    worst_ratio = std::max(worst_ratio, sup * (m + 2) / 2);
  }
  const auto x1 = *battery_symbol("x1");
  const auto fstar = rearrange_symbol(x1, rearrangement_rule());
  std::vector<double> errs;
  for (int m : {8, 32, 128}) {
    const auto lam = lambda_step(eigenvalues(assemble(x1, m)));
    double sup = 0.0;
    for (double s : grid)
      if (s >= 0.05 && s <= 0.95) sup = std::max(sup, std::abs(lam(s) - fstar(s)));
    errs.push_back(sup);
  }
  const bool x1_ok = errs[1] < errs[0] && errs[2] < errs[1];
  return {x3_ok && x1_ok, "x3 sup/(2/(m+2)) max " + num(worst_ratio) + "; x1 interior sup " + num(errs[0]) + " > " +
                              num(errs[1]) + " > " + num(errs[2])};
}

Outcome schur_property() {
  int held = 0, total = 0;
  double worst = 0.0;
  for (int m : {2, 4, 8}) {
    const auto r = schur_property_experiment(m, 1000, static_cast<std::uint64_t>(m));
    for (const auto& row : r.rows) {
      held += row.pass;
      ++total;
      worst = std::max(worst, row.measured);
    }
  }
  return {held == total && worst <= 1e-10,
          std::to_string(held) + "/" + std::to_string(total) + " hold, worst violation " + num(worst)};
}

Outcome rado_equivalence() {
  Rng rng(2024);
  int agree = 0, total = 0, inside = 0;
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
      for (auto& v : x) v = 4 * rng.uniform() - 2;
      double sx = 0.0, sy = 0.0;
      for (auto& v : y) v = 4 * rng.uniform() - 2;
      for (double v : x) sx += v;
      for (double v : y) sy += v;
      if (trial % 5) y.back() += sx - sy;  // mostly on the plane of equal sums
      const bool a = rado_membership(y, x, 1e-9);
      const bool b = oracle::hull_contains(y, x, 1e-9);
      agree += a == b;
      inside += b;
      ++total;
    }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " agree (" + std::to_string(inside) +
                              " inside)"};
}

Outcome horn_construction() {
  Rng rng(77);
  double spec_err = 0.0, diag_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    std::vector<double> l(static_cast<std::size_t>(n));
    for (auto& v : l) v = 4 * rng.uniform() - 2;
    const auto d = sample_hull(l, 1, static_cast<std::uint64_t>(trial)).front();
    const auto a = horn_construct(l, d, 1e-9);
    const auto got = oracle::jacobi_eigenvalues(a);
    auto want = l;
    std::sort(want.begin(), want.end(), std::greater<>());
    for (int i = 0; i < n; ++i) {
      spec_err = std::max(spec_err, std::abs(got[i] - want[i]));
      diag_err = std::max(diag_err, std::abs(a(i, i).real() - d[i]));
    }
  }
  return {spec_err <= 1e-9 && diag_err <= 1e-9, "spectrum err " + num(spec_err) + ", diagonal err " + num(diag_err)};
}

Outcome schur_projection() {
  std::vector<double> grid(256);
  for (int i = 0; i < 256; ++i) grid[i] = (i + 1) / 256.0;
  bool ok = true;
  double worst = -1.0;
  for (const auto& sym : symbol_battery()) {
    const auto r = schur_type_projection_check(sym, rearrangement_rule(), grid, {1e-6, 1e-8});
    ok = ok && r.all_pass();
    for (const auto& row : r.rows) worst = std::max(worst, row.measured);
  }
  return {ok, "max (int P(f)* - int f*) or residual " + num(worst)};
}

Outcome skorokhod() {
  const auto grid = midpoints(1000);
  const auto x3 = check_skorokhod_identity(*battery_symbol("x3"), rearrangement_rule(), grid);
  const auto step = check_skorokhod_identity(StepFunction({5, 1, 3}), grid);
  const std::vector<double> c = {0.7};
  const auto cs = check_skorokhod_identity(zonal_polynomial(c), rearrangement_rule(), grid);
  const auto cstep = check_skorokhod_identity(StepFunction({-2, -2, -2, -2}), grid);
  const bool ok = x3.sup_error <= x3.tolerance && step.sup_error == 0.0 && cs.sup_error == 0.0 &&
                  cstep.sup_error == 0.0;
  return {ok, "x3 " + num(x3.sup_error) + " <= " + num(x3.tolerance) + "; step " + num(step.sup_error) +
                  "; constants " + num(cs.sup_error) + ", " + num(cstep.sup_error)};
}

Outcome dyadic_density() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"rotation:0.41421356237309503", "doubling"}) {
    const auto out = density_experiment(map_by_name(name), {7, 31, 127, 511});
    for (std::size_t g = 0; g < 2; ++g) {
      std::vector<double> d;
      for (const auto& row : out.distances) d.push_back(row[g]);
      int inv = 0;
      for (std::size_t i = 1; i < d.size(); ++i) inv += d[i] > d[i - 1];
      const bool this_ok = inv <= 1 && d.back() < 0.5 * d.front();
      ok = ok && this_ok;
      detail += std::string(this_ok ? "" : "FAILED ") + name + (g ? "/cos" : "/line") + " " + num(d.front()) +
                "->" + num(d.back()) + "; ";
    }
  }
  // Rational rotations j/(m+1) against rank-m step test functions.
  Rng rng(5);
  double worst = 0.0;
  for (int m : {7, 31, 127, 511})
    for (int j : {1, 3, m / 2 + 1}) {
      const auto phi = rotation_map(static_cast<double>(j) / (m + 1));
      const auto approx = as_map(best_dyadic_approximation(phi, m));
      std::vector<double> v(static_cast<std::size_t>(m + 1));
      for (auto& x : v) x = rng.normal();
      worst = std::max(worst, sot_distance(approx, phi, StepFunction(v), 1 << 16));
    }
  ok = ok && worst == 0.0;
  detail += "rational rotations max " + num(worst);
  return {ok, detail};
}

Outcome claim_a() {
  const auto out = claim_a_experiment(*battery_symbol("x3"), rotation_map(0.25), {7, 15, 31, 63});
  bool ok = out.report.all_pass();
  std::string detail;
  for (const auto& row : out.rows) {
    ok = ok && row.eq6 == 0.0 && row.eq8 <= 2.0 / (row.m + 2) && row.eq8 <= row.eq6 + row.eq7 + 1e-12;
    detail += "m=" + std::to_string(row.m) + " eq8 " + num(row.eq8) + "; ";
  }
  return {ok, detail + std::to_string(out.report.rows.size() - out.report.failures()) + "/" +
                  std::to_string(out.report.rows.size()) + " rows"};
}

Outcome claim_b() {
  const auto out = claim_b_experiment(*battery_symbol("x3"), 32, 200, 0);
  const bool ok = out.rado_pass == 200 && out.step_pass == 200 && out.relaxed_pass == 200;
  return {ok, "rado " + std::to_string(out.rado_pass) + "/200, continuous " + std::to_string(out.step_pass) +
                  "/200, relaxed " + std::to_string(out.relaxed_pass) + "/200, eps_m " + num(out.epsilon)};
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    files[e.path().filename().string()] = os.str();
  }
  return files;
}

Outcome determinism(const fs::path& scratch) {
  std::map<std::string, std::string> runs[3];
  double secs = 0.0;
  const char* threads[3] = {"1", "1", "3"};
  bool exits_ok = true;
  for (int r = 0; r < 3; ++r) {
    const auto dir = scratch / ("suite_" + std::to_string(r));
    fs::remove_all(dir);
    std::ostringstream out, err;
    const auto t0 = std::chrono::steady_clock::now();
    for (const char* fmt : {"csv", "json"})
      exits_ok = exits_ok && main_entry({"experiment", "suite", "--output-dir", dir.string(), "--format", fmt,
                                         "--threads", threads[r]},
                                        out, err) == 0;
    secs = std::max(secs, seconds_since(t0));
    runs[r] = read_tree(dir);
  }
  const bool ok = exits_ok && !runs[0].empty() && runs[0] == runs[1] && runs[0] == runs[2];
  return {ok, std::to_string(runs[0].size()) + " files identical across 2 runs and 3 threads, suite " + num(secs) +
                  " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "tlab_acceptance";
  fs::create_directories(scratch);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"zonal closed form, m = 1..64", zonal_closed_form},
      {"coordinate spectra and isospectrality, m <= 16", coordinate_spectra},
      {"trace identity, battery, m <= 64", trace_identity},
      {"spectrum containment, battery, m <= 64", spectrum_containment},
      {"Szego decay over m = 8..64 and m=2 hand value", szego_convergence},
      {"Lambda^m -> f* for x3 and x1", lambda_to_fstar},
      {"Schur property, 1000 conjugations at m = 2, 4, 8", schur_property},
      {"Rado vs convex-hull oracle, lengths 1..3", rado_equivalence},
      {"Horn construction, 100 pairs, size <= 8", horn_construction},
      {"Schur-type projection, battery, 256-point grid", schur_projection},
      {"Skorokhod identity", skorokhod},
      {"dyadic density surrogate", dyadic_density},
      {"claim A certificate, rotation 1/4", claim_a},
      {"claim B certificate, x3, m = 32, 200 samples", claim_b},
      {"determinism of the experiment suite", [&] { return determinism(scratch); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << i + 1 << "] " << criteria[i].first << ": "
              << o.detail << " (" << num(seconds_since(t0)) << " s)" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " acceptance criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
