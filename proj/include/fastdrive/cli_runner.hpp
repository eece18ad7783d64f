#ifndef FASTDRIVE_CLI_RUNNER_HPP
#define FASTDRIVE_CLI_RUNNER_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace fastdrive {

inline constexpr const char* kToolVersion = "fastdrive 1.0.0";

// Invalid configuration; maps to exit code 2 at the command line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  nlohmann::json params;  // per-command parameters, defaults filled in
  std::string output;     // empty -> stdout
  std::string format = "csv";
  unsigned seed = 1;
  int jobs = 0;  // 0 -> library default thread count
  bool timestamps = false;
};

// Parse and validate a raw config object. Unknown keys and out-of-range
// values are rejected with itemized messages. The returned config has all
// defaults filled, so emit -> re-parse round-trips exactly.
ExperimentConfig validate_config(const nlohmann::json& raw);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Execute the experiment, writing to `out`. Returns 0 on success, 1 if a
// solver failed (partial results are flagged in the output).
int run(const ExperimentConfig& config, std::ostream& out);

// Same, but honors config.output (file path or stdout).
int run_to_output(const ExperimentConfig& config);

// 12-significant-digit float formatting used for all CSV/JSON numerics.
std::string format_double(double x);

}  // namespace fastdrive

#endif
