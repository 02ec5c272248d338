#include "tlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "tlab/error.hpp"
#include "tlab/limsup.hpp"

namespace tlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::set<std::string> kKeys = {"command", "kind",   "symbol", "map",  "ranks",  "seed",   "output_dir",
                                     "format",  "threads", "trials", "samples", "grid", "values", "against"};
const std::set<std::string> kTolerances = {"eigen",   "majorize", "containment", "trace", "projection_cumulative",
                                           "projection_total"};
const std::set<std::string> kKinds = {"claim-a", "claim-b", "schur", "schur-projection", "szego", "density", "suite"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, sep)) out.push_back(trim(tok));
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v))
    throw ArgumentError(key + ": expected a number, got '" + text + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) throw ArgumentError(key + ": expected an integer, got '" + text + "'");
  return v;
}

int parse_positive(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < 1 || v > 1'000'000'000) throw ArgumentError(key + ": must be a positive integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& t : split(text, ',')) out.push_back(parse_double(key, t));
  if (out.empty()) throw ArgumentError(key + ": empty list");
  return out;
}

SphereSymbol resolve_symbol(const std::string& text) {
  if (auto s = battery_symbol(text)) return *s;
  if (text.rfind("poly:", 0) == 0) {
    const auto coeffs = parse_list("symbol", text.substr(5));
    return zonal_polynomial(coeffs);
  }
  throw ArgumentError("symbol: unknown symbol '" + text +
                      "' (battery: one, x3, x1, x3sq, x1px3, x3cpx1x2; or poly:c0,c1,...)");
}

Command parse_command(const std::string& s) {
  if (s == "quantize") return Command::quantize;
  if (s == "spectrum") return Command::spectrum;
  if (s == "rearrange") return Command::rearrange;
  if (s == "majorize") return Command::majorize;
  if (s == "approx-map") return Command::approx_map;
  if (s == "experiment") return Command::experiment;
  throw ArgumentError("command: unknown command '" + s + "'");
}

void read_config_file(const std::string& path, std::map<std::string, std::string>& raw) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.rfind("tol.", 0) == 0) {
      if (!kTolerances.count(key.substr(4))) throw ArgumentError("unknown tolerance '" + key.substr(4) + "'");
    } else if (!kKeys.count(key)) {
      throw ArgumentError("unknown key '" + key + "' in " + path);
    }
    raw[key] = value;
  }
}

RunConfig build(const std::map<std::string, std::string>& raw) {
  RunConfig c;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = raw.find(k);
    return it == raw.end() ? nullptr : &it->second;
  };
  const auto* cmd = get("command");
  if (!cmd) throw ArgumentError("command: missing command");
  c.command = parse_command(*cmd);
  if (const auto* k = get("kind")) c.kind = *k;
  if (c.command == Command::experiment) {
    if (c.kind.empty()) throw ArgumentError("kind: experiment needs a kind");
    if (!kKinds.count(c.kind)) throw ArgumentError("kind: unknown experiment '" + c.kind + "'");
  } else if (!c.kind.empty()) {
    throw ArgumentError("kind: unexpected argument '" + c.kind + "'");
  }

  if (const auto* s = get("symbol")) {
    resolve_symbol(*s);
    c.symbol = *s;
  }
  if (const auto* m = get("map")) {
    map_by_name(*m);
    c.map = *m;
  }
  if (const auto* r = get("ranks")) {
    for (const auto& t : split(*r, ',')) c.ranks.push_back(parse_positive("ranks", t));
    if (c.ranks.empty()) throw ArgumentError("ranks: empty list");
    for (std::size_t i = 1; i < c.ranks.size(); ++i)
      if (c.ranks[i] <= c.ranks[i - 1]) throw ArgumentError("ranks must be strictly increasing");
  }
  if (const auto* s = get("seed")) {
    const long long v = parse_integer("seed", *s);
    if (v < 0) throw ArgumentError("seed: must be non-negative");
    c.seed = static_cast<std::uint64_t>(v);
  }
  if (const auto* d = get("output_dir")) {
    c.output_dir = *d;
  } else if (const char* env = std::getenv("TLAB_OUTPUT_DIR"); env && *env) {
    c.output_dir = env;
  } else {
    c.output_dir = ".";
  }
  if (const auto* f = get("format")) {
    if (*f == "csv") c.format = OutputFormat::csv;
    else if (*f == "json") c.format = OutputFormat::json;
    else throw ArgumentError("format: expected csv or json, got '" + *f + "'");
  }
  if (const auto* t = get("threads")) c.threads = parse_positive("threads", *t);
  if (const auto* t = get("trials")) c.trials = parse_positive("trials", *t);
  if (const auto* t = get("samples")) c.samples = parse_positive("samples", *t);
  if (const auto* t = get("grid")) c.grid = parse_positive("grid", *t);
  if (const auto* v = get("values")) c.values = parse_list("values", *v);
  if (const auto* v = get("against")) c.against = parse_list("against", *v);
  for (const auto& [k, v] : raw)
    if (k.rfind("tol.", 0) == 0) c.tolerances[k.substr(4)] = parse_double(k, v);

  auto need = [&](bool have, const char* key, const char* why) {
    if (!have) throw ArgumentError(std::string(key) + ": required by " + why);
  };
  const bool uses_symbol = c.command == Command::quantize || c.command == Command::spectrum ||
                           c.command == Command::rearrange ||
                           (c.command == Command::experiment &&
                            (c.kind == "claim-a" || c.kind == "claim-b" || c.kind == "schur-projection" ||
                             c.kind == "szego"));
  const bool uses_map = c.command == Command::approx_map ||
                        (c.command == Command::experiment && (c.kind == "claim-a" || c.kind == "density"));
  const bool uses_ranks = c.command == Command::quantize || c.command == Command::spectrum ||
                          c.command == Command::approx_map ||
                          (c.command == Command::experiment && c.kind != "schur-projection" && c.kind != "suite");
  need(!uses_symbol || !c.symbol.empty(), "symbol", "this command");
  need(!uses_map || !c.map.empty(), "map", "this command");
  need(!uses_ranks || !c.ranks.empty(), "ranks", "this command");
  if (c.command == Command::majorize) {
    if (c.values.empty() != c.against.empty()) throw ArgumentError("values/against: give both or neither");
    if (!c.values.empty() && c.values.size() != c.against.size())
      throw ArgumentError("against: length differs from values");
    if (c.values.empty()) {
      need(!c.symbol.empty(), "symbol", "majorize without --values");
      need(!c.ranks.empty(), "ranks", "majorize without --values");
    }
  }
  return c;
}

// ---- output helpers ----

std::string file_token(const std::string& s) {
  std::string out;
  for (char ch : s) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') ? ch : '-';
  return out;
}

std::string rank_token(const std::vector<int>& ranks) {
  if (ranks.size() == 1) return std::to_string(ranks.front());
  return std::to_string(ranks.front()) + "-" + std::to_string(ranks.back());
}

std::string extension(const RunConfig& c) { return c.format == OutputFormat::csv ? "csv" : "json"; }

double tolerance(const RunConfig& c, const std::string& name, double fallback) {
  const auto it = c.tolerances.find(name);
  return it == c.tolerances.end() ? fallback : it->second;
}

void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body, std::ostream& log) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("output_dir: cannot write '" + tmp.string() + "'");
    body(out);
    out.flush();
    if (!out) throw ArgumentError("output_dir: write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
  log << "wrote " << path.string() << '\n';
}

fs::path output_path(const RunConfig& c, const std::string& command, const std::string& subject,
                     const std::string& range, const std::string& ext) {
  return c.output_dir / (command + "_" + file_token(subject) + "_" + range + "." + ext);
}

void write_report(const RunConfig& c, const ExperimentReport& r, const std::string& subject,
                  const std::string& range, std::ostream& log) {
  const auto path = output_path(c, "experiment-" + r.name, subject, range, extension(c));
  write_atomic(path, [&](std::ostream& os) {
    if (c.format == OutputFormat::csv) write_report_csv(os, r);
    else write_report_json(os, r);
  }, log);
  log << r.name << ": " << (r.rows.size() - r.failures()) << "/" << r.rows.size() << " rows pass\n";
  for (const auto& row : r.rows)
    if (!row.pass) log << "  FAIL " << row.parameters << " measured=" << row.measured << " tol=" << row.tolerance << '\n';
}

std::vector<double> midpoint_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = (i + 0.5) / n;
  return g;
}

std::vector<double> right_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i + 1) / n;
  return g;
}

ordered_json certificate_json(const MajorizationCertificate& cert) {
  return {{"slacks", cert.slacks}, {"total_residual", cert.total_residual}, {"holds", cert.holds}};
}

// ---- commands ----

bool run_quantize(const RunConfig& c, std::ostream& log) {
  const auto symbol = resolve_symbol(c.symbol);
  for (int m : c.ranks) {
    const auto t = assemble(symbol, m, QuadratureRule::for_rank(m), c.threads);
    if (c.format == OutputFormat::csv) {
      write_atomic(output_path(c, "quantize", symbol.name, std::to_string(m), "txt"),
                   [&](std::ostream& os) { write_matrix(os, t); }, log);
    } else {
      ordered_json rows = ordered_json::array();
      for (Eigen::Index j = 0; j < t.entries.rows(); ++j) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index k = 0; k < t.entries.cols(); ++k)
          row.push_back({t.entries(j, k).real(), t.entries(j, k).imag()});
        rows.push_back(std::move(row));
      }
      const ordered_json doc = {{"symbol", symbol.name}, {"order", m}, {"entries", rows}};
      write_atomic(output_path(c, "quantize", symbol.name, std::to_string(m), "json"),
                   [&](std::ostream& os) { os << doc.dump(2) << '\n'; }, log);
    }
  }
  return true;
}

bool run_spectrum(const RunConfig& c, std::ostream& log) {
  const auto symbol = resolve_symbol(c.symbol);
  const double contain = tolerance(c, "containment", 1e-8);
  const double trace_tol = tolerance(c, "trace", 1e-8);
  std::vector<Spectrum> spectra;
  bool ok = true;
  ordered_json checks = ordered_json::array();
  for (int m : c.ranks) {
    const auto rule = QuadratureRule::for_rank(m);
    const auto t = assemble(symbol, m, rule, c.threads);
    auto s = eigenvalues(t, tolerance(c, "eigen", kEigenTolerance));
    double trace = 0.0;
    for (Eigen::Index k = 0; k <= m; ++k) trace += t.entries(k, k).real();
    const double trace_err = std::abs(trace - (m + 1) * integrate(symbol, rule));
    const bool trace_ok = trace_err <= trace_tol * (m + 1) * std::max(symbol.sup_bound, 1e-300);
    const bool contain_ok =
        s.values.front() <= symbol.max_value + contain && s.values.back() >= symbol.min_value - contain;
    if (!trace_ok) log << "FAIL trace identity at m=" << m << " error=" << trace_err << '\n';
    if (!contain_ok) log << "FAIL spectrum containment at m=" << m << '\n';
    ok = ok && trace_ok && contain_ok;
    checks.push_back({{"m", m}, {"trace_error", trace_err}, {"trace_ok", trace_ok}, {"contained", contain_ok}});
    spectra.push_back(std::move(s));
  }
  const auto path = output_path(c, "spectrum", symbol.name, rank_token(c.ranks), extension(c));
  write_atomic(path, [&](std::ostream& os) {
    if (c.format == OutputFormat::csv) {
      write_spectra_csv(os, spectra);
    } else {
      ordered_json arr = ordered_json::array();
      for (const auto& s : spectra) arr.push_back({{"m", s.order}, {"values", s.values}});
      os << ordered_json{{"symbol", symbol.name}, {"spectra", arr}, {"checks", checks}, {"pass", ok}}.dump(2)
         << '\n';
    }
  }, log);
  return ok;
}

bool run_rearrange(const RunConfig& c, std::ostream& log) {
  const auto symbol = resolve_symbol(c.symbol);
  const auto& rule = rearrangement_rule();
  const auto fstar = rearrange_symbol(symbol, rule);
  const auto grid = midpoint_grid(c.grid);
  const auto check = check_skorokhod_identity(symbol, rule, grid);
  const bool ok = check.sup_error <= check.tolerance;
  log << "skorokhod sup error " << check.sup_error << " (tolerance " << check.tolerance << ")\n";
  const auto path = output_path(c, "rearrange", symbol.name, std::to_string(c.grid), extension(c));
  write_atomic(path, [&](std::ostream& os) {
    if (c.format == OutputFormat::csv) {
      write_rearrangement_csv(os, fstar, grid);
    } else {
      std::vector<double> values;
      for (double s : grid) values.push_back(fstar(s));
      os << ordered_json{{"symbol", symbol.name},
                         {"s", grid},
                         {"fstar", values},
                         {"skorokhod", {{"sup_error", check.sup_error},
                                        {"tolerance", check.tolerance},
                                        {"points_checked", check.points_checked}}},
                         {"pass", ok}}
                .dump(2)
         << '\n';
    }
  }, log);
  return ok;
}

bool run_majorize(const RunConfig& c, std::ostream& log) {
  auto emit = [&](const MajorizationCertificate& cert, const std::string& subject, const std::string& range) {
    write_atomic(output_path(c, "majorize", subject, range, extension(c)), [&](std::ostream& os) {
      if (c.format == OutputFormat::csv) write_certificate_csv(os, cert);
      else os << certificate_json(cert).dump(2) << '\n';
    }, log);
    log << "majorization " << (cert.holds ? "holds" : "fails") << " (min slack " << cert.min_slack() << ")\n";
  };
  if (!c.values.empty()) {
    const double tol = tolerance(c, "majorize", default_tolerance(c.values));
    const auto cert = majorizes(c.values, c.against, tol);
    emit(cert, "vector", std::to_string(c.values.size()));
    return cert.holds;
  }
  const auto symbol = resolve_symbol(c.symbol);
  bool ok = true;
  for (int m : c.ranks) {
    const auto t = assemble(symbol, m, QuadratureRule::for_rank(m), c.threads);
    const auto s = eigenvalues(t, tolerance(c, "eigen", kEigenTolerance));
    const double tol = tolerance(c, "majorize", default_tolerance(s.values));
    const auto cert = schur_check(t.entries, s, tol);
    emit(cert, symbol.name, std::to_string(m));
    ok = ok && cert.holds;
  }
  return ok;
}

bool run_approx_map(const RunConfig& c, std::ostream& log) {
  const auto phi = map_by_name(c.map);
  struct Row {
    int m;
    double sot_linear, sot_cos;
    std::string perm;
  };
  std::vector<Row> rows;
  for (int m : c.ranks) {
    const auto sigma = best_dyadic_approximation(phi, m);
    const auto sm = as_map(sigma);
    rows.push_back({m, sot_distance(sm, phi, [](double s) { return 1.0 - 2.0 * s; }),
                    sot_distance(sm, phi, [](double s) { return std::cos(kPi * s); }), serialize_permutation(sigma)});
  }
  write_atomic(output_path(c, "approx-map", c.map, rank_token(c.ranks), extension(c)), [&](std::ostream& os) {
    if (c.format == OutputFormat::csv) {
      os << std::setprecision(17) << "m,sot_linear,sot_cos,permutation\n";
      for (const auto& r : rows) os << r.m << ',' << r.sot_linear << ',' << r.sot_cos << ',' << r.perm << '\n';
    } else {
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows)
        arr.push_back({{"m", r.m}, {"sot_linear", r.sot_linear}, {"sot_cos", r.sot_cos}, {"permutation", r.perm}});
      os << ordered_json{{"map", c.map}, {"rows", arr}}.dump(2) << '\n';
    }
  }, log);
  return true;
}

bool run_experiment(const RunConfig& c, std::ostream& log);

bool run_suite(const RunConfig& c, std::ostream& log) {
  struct Item {
    std::string kind, symbol, map;
    std::vector<int> ranks;
    int trials = 0, samples = 0;
  };
  const std::vector<Item> items = {
      {"claim-a", "x3", "rotation:0.25", {7, 15, 31}},
      {"claim-b", "x3", "", {16}, 0, 50},
      {"schur", "", "", {4}, 100, 0},
      {"schur-projection", "x1px3", "", {}},
      {"szego", "x3sq", "", {8, 16, 32}},
      {"density", "", "rotation:0.41421356237309503", {7, 31}},
  };
  bool ok = true;
  for (const auto& it : items) {
    RunConfig sub = c;
    sub.kind = it.kind;
    sub.symbol = it.symbol;
    sub.map = it.map;
    sub.ranks = it.ranks;
    if (it.trials) sub.trials = it.trials;
    if (it.samples) sub.samples = it.samples;
    ok = run_experiment(sub, log) && ok;
  }
  return ok;
}

bool run_experiment(const RunConfig& c, std::ostream& log) {
  if (c.kind == "suite") return run_suite(c, log);
  if (c.kind == "claim-a") {
    const auto symbol = resolve_symbol(c.symbol);
    ClaimAOptions opt;
    opt.threads = c.threads;
    auto out = claim_a_experiment(symbol, map_by_name(c.map), c.ranks, opt);
    write_report(c, out.report, symbol.name + "-" + c.map, rank_token(c.ranks), log);
    return out.report.all_pass();
  }
  if (c.kind == "claim-b") {
    const auto symbol = resolve_symbol(c.symbol);
    ClaimBOptions opt;
    opt.threads = c.threads;
    opt.grid = c.grid;
    opt.fstar = rearrange_symbol(symbol, rearrangement_rule());
    bool ok = true;
    for (int m : c.ranks) {
      auto out = claim_b_experiment(symbol, m, c.samples, c.seed, opt);
      write_report(c, out.report, symbol.name, std::to_string(m), log);
      log << "claim-b m=" << m << " epsilon=" << out.epsilon << '\n';
      ok = ok && out.report.all_pass();
    }
    return ok;
  }
  if (c.kind == "schur") {
    bool ok = true;
    for (int m : c.ranks) {
      const auto r = schur_property_experiment(m, c.trials, c.seed, tolerance(c, "majorize", 1e-10));
      write_report(c, r, "random", std::to_string(m), log);
      ok = ok && r.all_pass();
    }
    return ok;
  }
  if (c.kind == "schur-projection") {
    const auto symbol = resolve_symbol(c.symbol);
    ProjectionOptions opt;
    opt.cumulative_tol = tolerance(c, "projection_cumulative", opt.cumulative_tol);
    opt.total_tol = tolerance(c, "projection_total", opt.total_tol);
    const auto r = schur_type_projection_check(symbol, rearrangement_rule(), right_grid(c.grid), opt);
    write_report(c, r, symbol.name, std::to_string(c.grid), log);
    return r.all_pass();
  }
  if (c.kind == "szego") {
    const auto symbol = resolve_symbol(c.symbol);
    auto out = szego_experiment(symbol, c.ranks, c.threads);
    write_report(c, out.report, symbol.name, rank_token(c.ranks), log);
    if (c.format == OutputFormat::csv)
      write_atomic(output_path(c, "szego", symbol.name, rank_token(c.ranks), "csv"),
                   [&](std::ostream& os) { write_szego_csv(os, out.rows); }, log);
    return out.report.all_pass();
  }
  if (c.kind == "density") {
    auto out = density_experiment(map_by_name(c.map), c.ranks);
    write_report(c, out.report, c.map, rank_token(c.ranks), log);
    return out.report.all_pass();
  }
  throw ArgumentError("kind: unknown experiment '" + c.kind + "'");
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Toeplitz quantization and majorization laboratory", "tlab"};
  std::map<std::string, std::string> flags;
  std::string command, kind, config_file;
  std::vector<std::string> tols;
  app.add_option("command", command, "quantize | spectrum | rearrange | majorize | approx-map | experiment");
  app.add_option("kind", kind, "experiment kind: claim-a | claim-b | schur | schur-projection | szego | density | suite");
  app.add_option("--config", config_file, "file of 'key = value' lines; flags take precedence");
  const std::vector<std::pair<std::string, std::string>> simple = {
      {"symbol", "battery symbol or poly:c0,c1,..."},
      {"map", "identity | rotation:<alpha> | doubling | baker"},
      {"ranks", "comma separated, strictly increasing"},
      {"seed", "RNG seed (default 0)"},
      {"output-dir", "output directory (default $TLAB_OUTPUT_DIR or .)"},
      {"format", "csv | json"},
      {"threads", "worker threads for matrix assembly"},
      {"trials", "schur experiment trials"},
      {"samples", "claim-b hull samples"},
      {"grid", "s-grid size"},
      {"values", "majorize: comma separated x"},
      {"against", "majorize: comma separated y, tested for y < x"},
  };
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& [name, help] : simple) options[name] = app.add_option("--" + name, values[name], help);
  app.add_option("--tol", tols, "tolerance override name=value (eigen, majorize, containment, trace, "
                                "projection_cumulative, projection_total)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ArgumentError(e.what());
  }

  std::map<std::string, std::string> raw;
  if (!config_file.empty()) read_config_file(config_file, raw);
  if (!command.empty()) raw["command"] = command;
  if (!kind.empty()) raw["kind"] = kind;
  for (const auto& [name, opt] : options) {
    if (opt->count() == 0) continue;
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    raw[key] = values[name];
  }
  for (const auto& t : tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ArgumentError("tol: expected name=value, got '" + t + "'");
    const auto name = trim(t.substr(0, eq));
    if (!kTolerances.count(name)) throw ArgumentError("unknown tolerance '" + name + "'");
    raw["tol." + name] = trim(t.substr(eq + 1));
  }
  return build(raw);
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    bool ok = false;
    switch (config.command) {
      case Command::quantize: ok = run_quantize(config, log); break;
      case Command::spectrum: ok = run_spectrum(config, log); break;
      case Command::rearrange: ok = run_rearrange(config, log); break;
      case Command::majorize: ok = run_majorize(config, log); break;
      case Command::approx_map: ok = run_approx_map(config, log); break;
      case Command::experiment: ok = run_experiment(config, log); break;
    }
    return ok ? 0 : 1;
  } catch (const NumericalError& e) {
    log << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const ArgumentError& e) {
    log << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  return run(config, err);
}

}  // namespace tlab
