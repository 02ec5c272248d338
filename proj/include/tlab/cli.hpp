#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlab {

enum class Command { quantize, spectrum, rearrange, majorize, approx_map, experiment };
enum class OutputFormat { csv, json };

struct RunConfig {
  Command command = Command::spectrum;
  std::string kind;    ///< experiment kind: claim-a, claim-b, schur, schur-projection, szego, density, suite
  std::string symbol;  ///< battery name or "poly:c0,c1,..."
  std::string map;     ///< identity, rotation:<alpha>, doubling, baker
  std::vector<int> ranks;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  OutputFormat format = OutputFormat::csv;
  std::map<std::string, double> tolerances;
  int threads = 1;
  int trials = 1000;
  int samples = 200;
  int grid = 256;
  std::vector<double> values;   ///< majorize: candidate majorant x
  std::vector<double> against;  ///< majorize: vector tested for y < x
};

/// --help was requested; `what()` holds the usage text.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Command line (without argv[0]) plus an optional `--config FILE` of `key = value`
/// lines. Flags override the file. Throws ArgumentError naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args);

/// Executes the pipeline and writes files under output_dir.
/// 0 all checks pass, 1 a check failed, 3 numerical convergence failure.
int run(const RunConfig& config, std::ostream& log);

/// parse_config + run with error-to-exit-code mapping (2 for usage errors).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tlab
