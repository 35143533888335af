#include "caplab/cli.hpp"
#include "caplab/protocol.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace caplab::cli {
namespace {

namespace fs = std::filesystem;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig make(Command command, json doc) {
  doc["out"] = "unused.csv";
  return config_from_json(command, doc);
}

std::string error_of(Command command, const json& doc) {
  try {
    config_from_json(command, doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("caplab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(ParseRealList, ListsAndGrids) {
  EXPECT_EQ(parse_real_list("0.1, 0.5,1", "p"), (std::vector<double>{0.1, 0.5, 1.0}));
  const auto grid = parse_real_list("0:1:0.25", "p");
  EXPECT_EQ(grid, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const auto fine = parse_real_list("0:1:0.01", "p");
  ASSERT_EQ(fine.size(), 101u);
  EXPECT_EQ(fine.back(), 1.0);
  EXPECT_NEAR(fine[37], 0.37, 1e-15);
}

TEST(ParseRealList, ErrorsNameTheField) {
  for (const char* bad : {"", "a", "0:1", "1:0:0.1", "0:1:0", "0:1:0.3", "0.1,,0.2"}) {
    try {
      parse_real_list(bad, "p");
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find("'p'"), std::string::npos) << e.what();
    }
  }
}

TEST(Config, Defaults) {
  const RunConfig fig3 = make(Command::fig3, json::object());
  EXPECT_EQ(fig3.p.size(), 101u);
  const RunConfig retro = make(Command::retro_sim, json::object());
  EXPECT_EQ(retro.c, std::vector<long>{16});
  const RunConfig scan = make(Command::chi_scan, json::object());
  EXPECT_EQ(scan.c, (std::vector<long>{2, 8, 32}));
  EXPECT_EQ(scan.seed, 7u);
}

TEST(Config, AcceptsStringsNumbersAndLists) {
  const RunConfig cfg = make(Command::retro_sim, {{"d", "3"}, {"c", "2,4"}, {"p", {0.1, "0.2"}},
                                                 {"trials", 5}, {"seed", "42"}});
  EXPECT_EQ(cfg.d, 3);
  EXPECT_EQ(cfg.c, (std::vector<long>{2, 4}));
  EXPECT_EQ(cfg.p, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(cfg.trials, 5);
  EXPECT_EQ(cfg.seed, 42u);
}

TEST(Config, InvalidFieldsAreNamed) {
  const std::vector<std::tuple<Command, json, std::string>> cases{
      {Command::fig3, {{"p", 1.5}, {"out", "x"}}, "'p'"},
      {Command::fig3, {{"bogus", 1}, {"out", "x"}}, "'bogus'"},
      {Command::fig3, json::object(), "'out'"},
      {Command::capacity, {{"channel", "amplitude"}, {"out", "x"}}, "'channel'"},
      {Command::capacity, {{"channel", "depolarizing"}, {"dim", 3}, {"out", "x"}}, "'dim'"},
      {Command::capacity, {{"restarts", 0}, {"out", "x"}}, "'restarts'"},
      {Command::capacity, {{"tol", "abc"}, {"out", "x"}}, "'tol'"},
      {Command::retro_sim, {{"d", 1}, {"out", "x"}}, "'d'"},
      {Command::retro_sim, {{"c", "0"}, {"out", "x"}}, "'c'"},
      {Command::retro_sim, {{"trials", 2.5}, {"out", "x"}}, "'trials'"},
      {Command::retro_sim, {{"restarts", 2}, {"out", "x"}}, "'restarts'"},
      {Command::chi_scan, {{"samples", 0}, {"out", "x"}}, "'samples'"},
      {Command::chi_scan, {{"seed", -1}, {"out", "x"}}, "'seed'"},
      {Command::chi_scan, {{"command", "fig3"}, {"out", "x"}}, "'command'"},
  };
  for (const auto& [command, doc, field] : cases) {
    const std::string msg = error_of(command, doc);
    EXPECT_NE(msg.find(field), std::string::npos) << doc.dump() << " -> " << msg;
  }
}

TEST(Config, JsonRoundTrip) {
  const RunConfig cfg = make(Command::chi_scan, {{"d", 3}, {"c", {2, 4}}, {"samples", 3}, {"m", 5}});
  const RunConfig again = config_from_json(Command::chi_scan, config_to_json(cfg));
  EXPECT_EQ(config_to_json(cfg), config_to_json(again));
}

TEST(Commands, ParseCommandNames) {
  for (Command c : {Command::capacity, Command::retro_sim, Command::chi_scan, Command::fig3}) {
    EXPECT_EQ(parse_command(command_name(c)), c);
  }
  EXPECT_EQ(command_name(Command::retro_sim), "retro-sim");
  EXPECT_THROW(parse_command("plot"), ConfigError);
}

TEST(FormatReal, Rendering) {
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_real(-1e-20), "-1e-20");
}

TEST(Fig3, Curves) {
  const CommandResult r = cmd_fig3(make(Command::fig3, {{"p", "0,0.25,0.5,0.75,1"}}), 1);
  const auto rows = parse_csv(r.csv);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"p", "joint_rate", "erasure_alone", "retro_alone_upper"}));
  const std::vector<std::vector<double>> expected{
      {0, 1, 1, 0}, {0.25, 0.75, 0.5, 0}, {0.5, 0.5, 0, 0}, {0.75, 0.25, 0, 0}, {1, 0, 0, 0}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(std::stod(rows[i + 1][k]), expected[i][k], 1e-12);
    }
  }
}

TEST(Capacity, ErasureRows) {
  const CommandResult r =
      cmd_capacity(make(Command::capacity, {{"channel", "erasure"}, {"dim", 2}, {"p", "0.25,0.5"},
                                            {"restarts", 2}}),
                   1);
  const auto rows = parse_csv(r.csv);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"channel", "parameter", "chi_hat", "q1_hat", "p1_hat",
                                               "restarts", "converged", "seed"}));
  EXPECT_EQ(rows[1][0], "erasure");
  EXPECT_NEAR(std::stod(rows[1][2]), 0.75, 1e-3);
  EXPECT_NEAR(std::stod(rows[1][3]), 0.5, 1e-3);
  EXPECT_GE(std::stod(rows[1][4]), 0.5 - 1e-3);
  EXPECT_NEAR(std::stod(rows[2][2]), 0.5, 1e-3);
  EXPECT_LE(std::stod(rows[2][3]), 1e-6);
  EXPECT_EQ(rows[2][5], "2");
}

TEST(Capacity, IdentityUsesZeroParameter) {
  const CommandResult r =
      cmd_capacity(make(Command::capacity, {{"channel", "identity"}, {"dim", 2}, {"restarts", 1}}), 1);
  const auto rows = parse_csv(r.csv);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][1], "0");
  EXPECT_NEAR(std::stod(rows[1][2]), 1.0, 1e-3);
}

TEST(RetroSim, RowsMatchLibraryAndInvariants) {
  const RunConfig cfg = make(Command::retro_sim, {{"d", 2}, {"c", 4}, {"p", "0,0.5"}, {"trials", 6},
                                                  {"seed", 3}});
  const auto rows = parse_csv(cmd_retro_sim(cfg, 1).csv);
  ASSERT_EQ(rows.size(), 1u + 2u * (6u + 2u));
  const ProtocolEstimate est = joint_coherent_info(2, 4, 0.5, 6, 3);
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& row = rows[1 + 8 + k];
    EXPECT_EQ(row[2], "0.5");
    EXPECT_EQ(row[3], std::to_string(k));
    EXPECT_EQ(row[4], std::to_string(est.per_trial[k].instance_seed));
    EXPECT_NEAR(std::stod(row[5]), 1.0, 1e-9);
    EXPECT_GE(std::stod(row[6]), -1.0 - 1e-9);
  }
  const auto& mean = rows[1 + 8 + 6];
  EXPECT_EQ(mean[3], "mean");
  EXPECT_NEAR(std::stod(mean[7]), est.mean_joint, 1e-11);
  EXPECT_EQ(rows[1 + 8 + 7][3], "std_error");
  EXPECT_NEAR(std::stod(rows[1 + 8 + 7][7]), est.std_error, 1e-11);
}

TEST(RetroSim, IndependentSeedsAgreeWithinStandardErrors) {
  auto estimate = [](std::uint64_t seed) {
    return joint_coherent_info(3, 8, 0.4, 20, seed);
  };
  const ProtocolEstimate a = estimate(1);
  const ProtocolEstimate b = estimate(2);
  const double se = std::hypot(a.std_error, b.std_error);
  EXPECT_LE(std::abs(a.mean_joint - b.mean_joint), 3.0 * se + 1e-9);
}

TEST(ChiScan, SingleControlValueGivesFullRate) {
  const RunConfig cfg = make(Command::chi_scan, {{"d", 2}, {"c", 1}, {"instances", 2}, {"samples", 2},
                                                 {"restarts", 1}});
  const auto rows = parse_csv(cmd_chi_scan(cfg, 1).csv);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][3]), 1.0, 1e-3);
}

TEST(ChiScan, LargerControlLowersAverage) {
  const RunConfig cfg = make(Command::chi_scan, {{"d", 2}, {"c", "2,8"}, {"instances", 2},
                                                 {"samples", 4}, {"restarts", 1}});
  const CommandResult r = cmd_chi_scan(cfg, 2);
  const auto medians = r.summary.at("medians");
  ASSERT_EQ(medians.size(), 2u);
  EXPECT_GT(medians[0].at("median_chi_hat").get<double>(), medians[1].at("median_chi_hat").get<double>());
  for (const auto& m : medians) {
    EXPECT_GT(m.at("median_chi_hat").get<double>(), 0.0);
    EXPECT_LE(m.at("median_chi_hat").get<double>(), 1.0 + 1e-9);
  }
}

TEST(ChiScan, DeterministicAcrossThreadCounts) {
  const RunConfig cfg = make(Command::chi_scan, {{"d", 2}, {"c", "2,4"}, {"instances", 2},
                                                 {"samples", 2}, {"restarts", 1}});
  EXPECT_EQ(cmd_chi_scan(cfg, 1).csv, cmd_chi_scan(cfg, 3).csv);
}

TEST(WriteRun, ManifestReproducesCsv) {
  const fs::path dir = scratch_dir("manifest");
  RunConfig cfg = make(Command::retro_sim, {{"d", 2}, {"c", 2}, {"p", 0.3}, {"trials", 3}});
  cfg.out = (dir / "sub" / "run.csv").string();
  write_run(cfg, run_command(cfg, 1), 0.1, 1);
  ASSERT_TRUE(fs::exists(cfg.out));
  const json manifest = json::parse(read_file(cfg.out + ".manifest.json"));
  EXPECT_EQ(manifest.at("tool"), "caplab");
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("wall_clock_seconds"));
  EXPECT_TRUE(manifest.contains("summary"));

  RunConfig again = config_from_json(Command::retro_sim, manifest.at("config"));
  again.out = (dir / "rerun.csv").string();
  write_run(again, run_command(again, 2), 0.1, 2);
  EXPECT_EQ(read_file(cfg.out), read_file(again.out));
}

TEST(WriteRun, FailureLeavesNothingBehind) {
  const fs::path dir = scratch_dir("failure");
  RunConfig cfg = make(Command::fig3, {{"p", 0.5}});
  // A directory in place of the manifest makes the final rename fail.
  cfg.out = (dir / "run.csv").string();
  fs::create_directories(dir / "run.csv.manifest.json" / "occupied");
  EXPECT_ANY_THROW(write_run(cfg, run_command(cfg, 1), 0.0, 1));
  EXPECT_FALSE(fs::exists(dir / "run.csv"));
  EXPECT_FALSE(fs::exists(dir / "run.csv.tmp"));
  EXPECT_FALSE(fs::exists(dir / "run.csv.manifest.json.tmp"));
}

}  // namespace
}  // namespace caplab::cli
