#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fbc::cli {

  inline constexpr char const* tool_version = "fbc 1.0.0";

  enum class Command { analyze, chain, gradient, oracle, snf };

  enum ExitCode : int {
    exit_ok         = 0,
    exit_internal   = 1,
    exit_config     = 2,
    exit_validation = 3,
    exit_resource   = 4,
  };

  struct ExperimentConfig {
    Command     command = Command::gradient;
    // A path to a JSON document, or the JSON text itself when it starts
    // with '{'. Either {"rank", "suffixes"} or {"rank", "images"}.
    std::string monodromy;
    std::string chain      = "cyclic";  // cyclic | modp | lowindex
    std::size_t levels     = 3;
    std::vector<std::uint32_t> primes{2, 3, 5};
    std::size_t max_index  = 3;
    std::size_t ball       = 2;
    std::size_t sample     = 1000;
    std::uint64_t seed     = 0;
    std::string matrix;  // snf only
    std::string out      = ".";
  };

  // Stable 64-bit hash of everything in the config that affects artifacts.
  std::string config_hash(ExperimentConfig const& config);

  // Computes all artifacts in memory, keyed by file name.
  std::map<std::string, std::string> build_artifacts(
      ExperimentConfig const& config);

  // Builds the artifacts and writes them to config.out. Nothing is left
  // behind on failure. Diagnostics go to `log`.
  int run(ExperimentConfig const& config, std::ostream& log);

}  // namespace fbc::cli
