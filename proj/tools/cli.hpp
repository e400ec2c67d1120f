#pragma once

// Batch front-end shared by the shiftapprox executable and its tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace shiftapprox::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitError = 1,
  kExitFail = 2,
  kExitInconclusive = 3,
  kExitConfig = 64,
};

// Invalid or unparsable configuration; maps to kExitConfig.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<std::string> kernel;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<int> r;
  std::optional<std::int64_t> K;
  std::optional<std::string> cls;
  std::optional<double> tol;
  std::uint64_t seed = 0x5EED;
  std::optional<std::string> out;
  std::string format = "csv";
  std::optional<std::string> theorem;
  int r_max = 3;
  int n_max = 6;
  std::optional<int> family;
  std::optional<int> degree;
  std::optional<std::string> parity;
  std::optional<std::string> input;
  int threads = 1;
};

// Overlays the keys of a JSON object onto cfg.  Keys use the flag names
// ("kernel", "n", "r-max", ...).  Throws ConfigError on unknown keys and
// mistyped values.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

// Worker count from SHIFTAPPROX_THREADS, else the hardware concurrency.
int threads_from_env();

int run_certify(const RunConfig& cfg, std::ostream& out);
int run_widths(const RunConfig& cfg, std::ostream& out);
int run_project(const RunConfig& cfg, std::ostream& out);
int run_splines(const RunConfig& cfg, std::ostream& out);
int run_kernels(const RunConfig& cfg, std::ostream& out);

// Dispatches on cfg.command and converts failures to exit codes, writing a
// one-line diagnostic to err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace shiftapprox::cli
