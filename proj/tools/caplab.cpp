// caplab: channel-capacity experiment runner.
//
//   caplab capacity  --channel erasure --dim 2 --p 0.5 --restarts 20 --seed 7 --out runs/er.csv
//   caplab retro-sim --d 4 --c 16 --p 0.5 --trials 50 --seed 7 --out runs/retro.csv
//   caplab chi-scan  --d 2 --c 2,8,32 --instances 10 --seed 7 --out runs/scan.csv
//   caplab fig3      --p-grid 0:1:0.01 --out runs/fig3.csv
//
// Every subcommand also accepts --config file.json (a config document or a
// previous run manifest); flags override keys from the file.

#include "caplab/cli.hpp"
#include "caplab/parallel.hpp"
#include "caplab/qmath.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using caplab::cli::json;

struct Subcommand {
  CLI::App* app;
  caplab::cli::Command command;
  std::string config_path;
  std::map<std::string, std::string> flags;  // config key -> raw flag text
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add_flag(Subcommand& sub, const std::string& name, const std::string& key,
              const std::string& help) {
  sub.options.emplace_back(key, sub.app->add_option(name, sub.flags[key], help));
}

json load_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw caplab::cli::ConfigError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw caplab::cli::ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  // A run manifest carries its config under "config".
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) return doc["config"];
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum channel capacity experiments"};
  app.require_subcommand(1);

  std::vector<Subcommand> subs;
  subs.reserve(4);
  auto make = [&](const char* name, const char* help, caplab::cli::Command cmd) -> Subcommand& {
    subs.push_back({app.add_subcommand(name, help), cmd, {}, {}, {}});
    Subcommand& s = subs.back();
    s.app->add_option("--config", s.config_path, "JSON config or run manifest");
    add_flag(s, "--out", "out", "output CSV path");
    return s;
  };

  Subcommand& capacity = make("capacity", "estimate chi, Q1 and P1 of a channel",
                              caplab::cli::Command::capacity);
  add_flag(capacity, "--channel", "channel", "erasure | identity | depolarizing | dephasing");
  add_flag(capacity, "--dim", "dim", "input dimension");
  add_flag(capacity, "--p", "p", "noise parameter(s): value, list a,b or grid start:stop:step");
  add_flag(capacity, "--restarts", "restarts", "random restarts per optimization");
  add_flag(capacity, "--m", "m", "ensemble size (0: input dimension squared)");
  add_flag(capacity, "--tol", "tol", "stop when an iteration gains less than this");
  add_flag(capacity, "--max-iterations", "max_iterations", "iteration cap per restart");
  add_flag(capacity, "--seed", "seed", "master seed");

  Subcommand& retro = make("retro-sim", "simulate the joint retro/erasure protocol",
                           caplab::cli::Command::retro_sim);
  add_flag(retro, "--d", "d", "data dimension");
  add_flag(retro, "--c", "c", "control dimension(s), comma separated");
  add_flag(retro, "--p", "p", "erasure probability: value, list or grid");
  add_flag(retro, "--p-grid", "p", "alias of --p");
  add_flag(retro, "--trials", "trials", "sampled instances");
  add_flag(retro, "--seed", "seed", "master seed");

  Subcommand& scan = make("chi-scan", "Holevo estimates of the retro channel versus c",
                          caplab::cli::Command::chi_scan);
  add_flag(scan, "--d", "d", "data dimension");
  add_flag(scan, "--c", "c", "control dimensions, comma separated");
  add_flag(scan, "--instances", "instances", "estimates per control dimension");
  add_flag(scan, "--samples", "samples", "channel realizations averaged per estimate");
  add_flag(scan, "--restarts", "restarts", "random restarts per optimization");
  add_flag(scan, "--m", "m", "ensemble size (0: d squared)");
  add_flag(scan, "--tol", "tol", "stop when an iteration gains less than this");
  add_flag(scan, "--max-iterations", "max_iterations", "iteration cap per restart");
  add_flag(scan, "--seed", "seed", "master seed");

  Subcommand& fig3 = make("fig3", "analytic normalized rate curves", caplab::cli::Command::fig3);
  add_flag(fig3, "--p-grid", "p", "grid start:stop:step or list");

  CLI11_PARSE(app, argc, argv);

  for (Subcommand& sub : subs) {
    if (!sub.app->parsed()) continue;
    try {
      json doc = sub.config_path.empty() ? json::object() : load_document(sub.config_path);
      for (const auto& [key, opt] : sub.options) {
        if (opt->count() > 0) doc[key] = sub.flags[key];
      }
      const caplab::cli::RunConfig cfg = caplab::cli::config_from_json(sub.command, doc);
      const int threads = caplab::default_thread_count();
      const auto start = std::chrono::steady_clock::now();
      const caplab::cli::CommandResult result = caplab::cli::run_command(cfg, threads);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      caplab::cli::write_run(cfg, result, seconds, threads);
      std::cout << "wrote " << cfg.out << " and " << cfg.out << ".manifest.json\n";
      return 0;
    } catch (const caplab::cli::ConfigError& e) {
      std::cerr << "caplab " << caplab::cli::command_name(sub.command) << ": " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "caplab " << caplab::cli::command_name(sub.command) << ": " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
