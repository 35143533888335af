#include "caplab/cli.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace caplab::cli {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("invalid value for '" + field + "': " + why);
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
}

double parse_real(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    fail(field, "'" + text + "' is not a number");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    fail(field, "'" + text + "' is not an integer");
  }
  return v;
}

long long get_integer(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v != std::floor(v)) fail(field, "expected an integer");
    return static_cast<long long>(v);
  }
  if (j.is_string()) return parse_integer(j.get<std::string>(), field);
  fail(field, "expected an integer");
}

std::uint64_t get_seed(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  if (j.is_string()) {
    const std::string t = trim(j.get<std::string>());
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      fail(field, "expected a non-negative integer");
    }
    return v;
  }
  fail(field, "expected a non-negative integer");
}

double get_real(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>(), field);
  fail(field, "expected a number");
}

std::vector<double> get_real_list(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_string()) return parse_real_list(j.get<std::string>(), field);
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& e : j) out.push_back(get_real(e, field));
    if (out.empty()) fail(field, "empty list");
    return out;
  }
  fail(field, "expected a number, list, or start:stop:step grid");
}

std::vector<long> get_integer_list(const json& j, const std::string& field) {
  std::vector<long> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(static_cast<long>(get_integer(e, field)));
  } else if (j.is_string()) {
    std::stringstream ss(j.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(static_cast<long>(parse_integer(item, field)));
  } else {
    out.push_back(static_cast<long>(get_integer(j, field)));
  }
  if (out.empty()) fail(field, "empty list");
  return out;
}

const std::set<std::string>& keys_for(Command c) {
  static const std::set<std::string> capacity{"command", "channel", "dim", "p", "restarts", "m",
                                              "tol", "max_iterations", "seed", "out"};
  static const std::set<std::string> retro{"command", "d", "c", "p", "trials", "seed", "out"};
  static const std::set<std::string> scan{"command", "d", "c", "instances", "samples", "restarts",
                                          "m", "tol", "max_iterations", "seed", "out"};
  static const std::set<std::string> fig3{"command", "p", "out"};
  switch (c) {
    case Command::capacity: return capacity;
    case Command::retro_sim: return retro;
    case Command::chi_scan: return scan;
    case Command::fig3: return fig3;
  }
  return fig3;
}

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) fail(field, why);
}

void validate(const RunConfig& cfg) {
  auto probabilities = [&] {
    for (double p : cfg.p) require(p >= 0.0 && p <= 1.0, "p", "values must lie in [0, 1]");
  };
  auto optimizer = [&] {
    require(cfg.restarts >= 1, "restarts", "must be >= 1");
    require(cfg.m >= 0, "m", "must be >= 0 (0 selects the default)");
    require(cfg.tol >= 0.0, "tol", "must be >= 0");
    require(cfg.max_iterations >= 1, "max_iterations", "must be >= 1");
  };
  switch (cfg.command) {
    case Command::capacity:
      require(cfg.channel == "erasure" || cfg.channel == "identity" ||
                  cfg.channel == "depolarizing" || cfg.channel == "dephasing",
              "channel", "expected one of erasure, identity, depolarizing, dephasing");
      require(cfg.dim >= 1, "dim", "must be >= 1");
      require((cfg.channel != "depolarizing" && cfg.channel != "dephasing") || cfg.dim == 2, "dim",
              "depolarizing and dephasing channels act on qubits (dim 2)");
      probabilities();
      optimizer();
      break;
    case Command::retro_sim:
      require(cfg.d >= 2, "d", "must be >= 2");
      for (long c : cfg.c) require(c >= 1, "c", "values must be >= 1");
      require(cfg.trials >= 1, "trials", "must be >= 1");
      probabilities();
      break;
    case Command::chi_scan:
      require(cfg.d >= 2, "d", "must be >= 2");
      for (long c : cfg.c) require(c >= 1, "c", "values must be >= 1");
      require(cfg.instances >= 1, "instances", "must be >= 1");
      require(cfg.samples >= 1, "samples", "must be >= 1");
      optimizer();
      break;
    case Command::fig3:
      probabilities();
      break;
  }
  require(!cfg.out.empty(), "out", "an output path is required");
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::capacity: return "capacity";
    case Command::retro_sim: return "retro-sim";
    case Command::chi_scan: return "chi-scan";
    case Command::fig3: return "fig3";
  }
  return "";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::capacity, Command::retro_sim, Command::chi_scan, Command::fig3}) {
    if (command_name(c) == name) return c;
  }
  fail("command", "unknown command '" + name + "'");
}

std::vector<double> parse_real_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) fail(field, "grid must be start:stop:step");
    const double start = parse_real(parts[0], field);
    const double stop = parse_real(parts[1], field);
    const double step = parse_real(parts[2], field);
    if (!(step > 0.0) || stop < start) fail(field, "grid needs step > 0 and stop >= start");
    const double span = (stop - start) / step;
    const auto intervals = static_cast<long long>(std::llround(span));
    if (std::abs(span - static_cast<double>(intervals)) > 1e-9 * std::max(1.0, span)) {
      fail(field, "grid step must divide stop - start");
    }
    if (intervals > 10'000'000) fail(field, "grid has too many points");
    for (long long i = 0; i <= intervals; ++i) {
      out.push_back(intervals == 0 ? start
                                   : start + (stop - start) * static_cast<double>(i) /
                                                 static_cast<double>(intervals));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, field));
  if (out.empty()) fail(field, "empty list");
  return out;
}

RunConfig config_from_json(Command command, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  RunConfig cfg;
  cfg.command = command;
  if (command == Command::fig3) cfg.p = parse_real_list("0:1:0.01", "p");
  if (command == Command::retro_sim) cfg.c = {16};
  if (command == Command::chi_scan) cfg.c = {2, 8, 32};

  const auto& allowed = keys_for(command);
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) fail(key, "not a setting of the " + command_name(command) + " command");
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != command_name(command)) {
        fail("command", "config was written for a different command");
      }
    } else if (key == "channel") {
      if (!value.is_string()) fail(key, "expected a string");
      cfg.channel = value.get<std::string>();
    } else if (key == "dim") {
      cfg.dim = static_cast<long>(get_integer(value, key));
    } else if (key == "d") {
      cfg.d = static_cast<long>(get_integer(value, key));
    } else if (key == "c") {
      cfg.c = get_integer_list(value, key);
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(get_integer(value, key));
    } else if (key == "instances") {
      cfg.instances = static_cast<int>(get_integer(value, key));
    } else if (key == "samples") {
      cfg.samples = static_cast<int>(get_integer(value, key));
    } else if (key == "p") {
      cfg.p = get_real_list(value, key);
    } else if (key == "restarts") {
      cfg.restarts = static_cast<int>(get_integer(value, key));
    } else if (key == "m") {
      cfg.m = static_cast<long>(get_integer(value, key));
    } else if (key == "tol") {
      cfg.tol = get_real(value, key);
    } else if (key == "max_iterations") {
      cfg.max_iterations = static_cast<int>(get_integer(value, key));
    } else if (key == "seed") {
      cfg.seed = get_seed(value, key);
    } else if (key == "out") {
      if (!value.is_string()) fail(key, "expected a string");
      cfg.out = value.get<std::string>();
    }
  }
  validate(cfg);
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["command"] = command_name(cfg.command);
  switch (cfg.command) {
    case Command::capacity:
      j["channel"] = cfg.channel;
      j["dim"] = cfg.dim;
      j["p"] = cfg.p;
      j["restarts"] = cfg.restarts;
      j["m"] = cfg.m;
      j["tol"] = cfg.tol;
      j["max_iterations"] = cfg.max_iterations;
      j["seed"] = cfg.seed;
      break;
    case Command::retro_sim:
      j["d"] = cfg.d;
      j["c"] = cfg.c;
      j["p"] = cfg.p;
      j["trials"] = cfg.trials;
      j["seed"] = cfg.seed;
      break;
    case Command::chi_scan:
      j["d"] = cfg.d;
      j["c"] = cfg.c;
      j["instances"] = cfg.instances;
      j["samples"] = cfg.samples;
      j["restarts"] = cfg.restarts;
      j["m"] = cfg.m;
      j["tol"] = cfg.tol;
      j["max_iterations"] = cfg.max_iterations;
      j["seed"] = cfg.seed;
      break;
    case Command::fig3:
      j["p"] = cfg.p;
      break;
  }
  j["out"] = cfg.out;
  return j;
}

}  // namespace caplab::cli
