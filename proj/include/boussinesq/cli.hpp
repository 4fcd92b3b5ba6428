#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "boussinesq/bench.hpp"

namespace bouss {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNotConverged = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

/// Bad configuration value. `where` is the flag ("--ra") or the JSON
/// pointer ("/ra") the value came from.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Config or output file that cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every setting of the tool, defaults materialized. The JSON schema is
/// flat and uses these member names as keys.
struct CliConfig {
  std::string case_spec = "cavity";  // cavity | complex | mms | file:<path>
  std::vector<std::string> methods = {"picard-newton"};
  std::vector<int> depths = {1};
  double ra = 1e4;
  std::vector<double> ra_list;  // sweep grid
  int n = 16;
  bool barycentric = true;
  double tolerance = 1e-8;
  int max_iters = 200;
  double blowup = 1e10;
  int jobs = 1;
  std::string out = "out";
  std::vector<int> levels = {8, 16, 32};  // mms mesh levels
  double refine_granularity = 0.0;        // sweep bisection step, 0 = off
};

/// Field names accepted in config files.
std::vector<std::string> config_keys();

/// Applies one field to `cfg`, validating it. Throws ConfigError citing
/// `where`.
void apply_config_value(CliConfig& cfg, const std::string& key, const nlohmann::json& value,
                        const std::string& where);
/// Applies every member of a flat JSON object (keys are reported as JSON
/// pointers under `prefix`).
void apply_config_json(CliConfig& cfg, const nlohmann::json& obj, const std::string& prefix = "");

/// Reads a config file over the defaults. A run manifest is accepted too:
/// its "config" member is used. Throws IoError or ConfigError.
CliConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const CliConfig& cfg);

SolverConfig solver_config(const CliConfig& cfg);
BenchmarkCase make_case(const CliConfig& cfg);

/// Resolved configuration, tool version, mesh statistics, timestamp.
nlohmann::json make_manifest(const std::string& command, const CliConfig& cfg, const BenchmarkCase& bc);

const char* tool_version();

/// Entry point of the `bouss` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bouss
