#pragma once

// Experiment harness behind the `caplab` executable.
//
// A run is described by a RunConfig, built from a JSON document (a config
// file or the "config" object of a previous run manifest) with command-line
// flags layered on top. Each command renders its CSV in memory; write_run
// then publishes the CSV and the manifest atomically.

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace caplab::cli {

using nlohmann::json;

enum class Command { capacity, retro_sim, chi_scan, fig3 };

std::string command_name(Command c);
Command parse_command(const std::string& name);

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::fig3;

  // capacity
  std::string channel = "erasure";
  long dim = 2;

  // retro-sim, chi-scan
  long d = 2;
  std::vector<long> c{1};
  int trials = 20;
  int instances = 10;
  int samples = 8;

  // probabilities: single values, lists, or a start:stop:step grid
  std::vector<double> p{0.5};

  // optimizer
  int restarts = 4;
  long m = 0;
  double tol = 1e-7;
  int max_iterations = 2000;

  std::uint64_t seed = 7;
  std::string out;
};

/// Defaults for `command` overlaid with `doc`. Unknown keys are rejected.
RunConfig config_from_json(Command command, const json& doc);

/// Canonical JSON echo of every field used by the command.
json config_to_json(const RunConfig& cfg);

/// Parses "a,b,c" or "start:stop:step" (inclusive of stop) into values.
std::vector<double> parse_real_list(const std::string& text, const std::string& field);

struct CommandResult {
  std::string csv;
  json summary;
};

/// Each command is a pure function of the config; `threads` only affects speed.
CommandResult cmd_capacity(const RunConfig& cfg, int threads);
CommandResult cmd_retro_sim(const RunConfig& cfg, int threads);
CommandResult cmd_chi_scan(const RunConfig& cfg, int threads);
CommandResult cmd_fig3(const RunConfig& cfg, int threads);

CommandResult run_command(const RunConfig& cfg, int threads);

/// 12 significant digits, '.' decimal separator, no negative zero.
std::string format_real(double v);

/// Writes `<out>` and `<out>.manifest.json` through temporary files and
/// renames, so a failed run leaves neither behind.
void write_run(const RunConfig& cfg, const CommandResult& result, double wall_seconds, int threads);

}  // namespace caplab::cli
