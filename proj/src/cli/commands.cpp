#include "caplab/capacities.hpp"
#include "caplab/channels.hpp"
#include "caplab/cli.hpp"
#include "caplab/parallel.hpp"
#include "caplab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace caplab::cli {

namespace {

namespace fs = std::filesystem;

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string> header) { row(header); }

  template <typename Range>
  void row(const Range& cells) {
    bool first = true;
    for (const auto& cell : cells) {
      if (!first) out_ << ',';
      out_ << cell;
      first = false;
    }
    out_ << '\n';
  }
  void row(std::initializer_list<std::string> cells) { row<std::initializer_list<std::string>>(cells); }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string integer(long long v) { return std::to_string(v); }
std::string unsigned_integer(std::uint64_t v) { return std::to_string(v); }

AscentSettings settings_from(const RunConfig& cfg, int threads) {
  AscentSettings s;
  s.ensemble_size = cfg.m;
  s.restarts = cfg.restarts;
  s.tol = cfg.tol;
  s.max_iterations = cfg.max_iterations;
  s.threads = threads;
  return s;
}

QuantumChannel build_channel(const std::string& kind, Index dim, double p) {
  if (kind == "identity") return identity_channel(dim);
  if (kind == "erasure") return erasure_channel(dim, p);
  if (kind == "depolarizing") return depolarizing_channel(p);
  return dephasing_channel(p);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CommandResult cmd_capacity(const RunConfig& cfg, int threads) {
  CsvWriter csv{"channel", "parameter", "chi_hat", "q1_hat", "p1_hat", "restarts", "converged",
                "seed"};
  const AscentSettings settings = settings_from(cfg, threads);
  const std::vector<double> params = cfg.channel == "identity" ? std::vector<double>{0.0} : cfg.p;
  json rows = json::array();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const QuantumChannel channel = build_channel(cfg.channel, cfg.dim, params[k]);
    Rng rng(derive_seed(cfg.seed, k));
    const OptimizationReport chi = maximize_holevo(channel, settings, rng);
    const OptimizationReport q1 = maximize_coherent(channel, settings, rng);
    const OptimizationReport p1 = maximize_private(channel, settings, rng);
    const bool converged = chi.converged && q1.converged && p1.converged;
    csv.row({cfg.channel, format_real(params[k]), format_real(chi.value), format_real(q1.value),
             format_real(p1.value), integer(cfg.restarts), converged ? "true" : "false",
             unsigned_integer(cfg.seed)});
    rows.push_back({{"parameter", params[k]},
                    {"chi_hat", chi.value},
                    {"q1_hat", q1.value},
                    {"p1_hat", p1.value},
                    {"converged", converged}});
  }
  return {csv.str(), {{"rows", rows}}};
}

CommandResult cmd_retro_sim(const RunConfig& cfg, int threads) {
  CsvWriter csv{"d", "c", "p", "trial", "seed", "not_erased", "erased", "joint_at_p"};
  json summary = json::array();
  for (long c : cfg.c) {
    const std::vector<BranchValues> branches =
        sample_branches(cfg.d, c, cfg.trials, cfg.seed, threads);
    for (double p : cfg.p) {
      const ProtocolEstimate est = combine_branches(branches, p, cfg.seed);
      const std::string head = integer(cfg.d) + "," + integer(c) + "," + format_real(p);
      double sum_ne = 0.0;
      double sum_ne2 = 0.0;
      double sum_er2 = 0.0;
      for (std::size_t k = 0; k < branches.size(); ++k) {
        const BranchValues& b = branches[k];
        const double joint = (1.0 - p) * b.not_erased + p * b.erased;
        csv.row({head, integer(static_cast<long long>(k)), unsigned_integer(b.instance_seed),
                 format_real(b.not_erased), format_real(b.erased), format_real(joint)});
        sum_ne += b.not_erased;
      }
      const double n = static_cast<double>(branches.size());
      const double mean_ne = sum_ne / n;
      for (const auto& b : branches) {
        sum_ne2 += (b.not_erased - mean_ne) * (b.not_erased - mean_ne);
        sum_er2 += (b.erased - est.mean_erased) * (b.erased - est.mean_erased);
      }
      auto se = [n](double ss) { return n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0; };
      csv.row({head, std::string("mean"), std::string(), format_real(mean_ne),
               format_real(est.mean_erased), format_real(est.mean_joint)});
      csv.row({head, std::string("std_error"), std::string(), format_real(se(sum_ne2)),
               format_real(se(sum_er2)), format_real(est.std_error)});
      summary.push_back({{"c", c},
                         {"p", p},
                         {"mean_joint", est.mean_joint},
                         {"std_error", est.std_error},
                         {"mean_erased", est.mean_erased}});
    }
  }
  return {csv.str(), {{"estimates", summary}}};
}

CommandResult cmd_chi_scan(const RunConfig& cfg, int threads) {
  CsvWriter csv{"d", "c", "instance_seed", "chi_hat"};
  AscentSettings settings = settings_from(cfg, 1);
  if (settings.ensemble_size == 0) settings.ensemble_size = cfg.d * cfg.d;

  struct Job {
    long c;
    std::uint64_t seed;
    double chi = 0.0;
  };
  std::vector<Job> jobs;
  for (long c : cfg.c) {
    const std::uint64_t c_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c));
    for (int i = 0; i < cfg.instances; ++i) {
      jobs.push_back({c, derive_seed(c_seed, static_cast<std::uint64_t>(i))});
    }
  }
  parallel_for(jobs.size(), threads, [&](std::size_t k) {
    Job& job = jobs[k];
    std::vector<QuantumChannel> channels;
    channels.reserve(static_cast<std::size_t>(cfg.samples));
    for (int s = 0; s < cfg.samples; ++s) {
      channels.push_back(retro_fixed_channel(
          sample_retro_instance(cfg.d, job.c, derive_seed(job.seed, static_cast<std::uint64_t>(s)))));
    }
    Rng rng(job.seed);
    job.chi = maximize_average_holevo(channels, settings, rng).value;
  });

  json medians = json::array();
  for (long c : cfg.c) {
    std::vector<double> values;
    for (const Job& job : jobs) {
      if (job.c != c) continue;
      csv.row({integer(cfg.d), integer(c), unsigned_integer(job.seed), format_real(job.chi)});
      values.push_back(job.chi);
    }
    medians.push_back({{"c", c}, {"median_chi_hat", median(values)}});
  }
  return {csv.str(), {{"medians", medians}}};
}

CommandResult cmd_fig3(const RunConfig& cfg, int /*threads*/) {
  CsvWriter csv{"p", "joint_rate", "erasure_alone", "retro_alone_upper"};
  for (double p : cfg.p) {
    csv.row({format_real(p), format_real(1.0 - p), format_real(std::max(0.0, 1.0 - 2.0 * p)),
             format_real(0.0)});
  }
  return {csv.str(), {{"points", cfg.p.size()}}};
}

CommandResult run_command(const RunConfig& cfg, int threads) {
  switch (cfg.command) {
    case Command::capacity: return cmd_capacity(cfg, threads);
    case Command::retro_sim: return cmd_retro_sim(cfg, threads);
    case Command::chi_scan: return cmd_chi_scan(cfg, threads);
    case Command::fig3: return cmd_fig3(cfg, threads);
  }
  throw ConfigError("unknown command");
}

void write_run(const RunConfig& cfg, const CommandResult& result, double wall_seconds, int threads) {
  const fs::path out(cfg.out);
  const fs::path manifest_path = out.string() + ".manifest.json";
  if (out.has_parent_path()) fs::create_directories(out.parent_path());

  json manifest;
  manifest["tool"] = "caplab";
  manifest["version"] = CAPLAB_VERSION;
  manifest["config"] = config_to_json(cfg);
  manifest["threads"] = threads;
  manifest["wall_clock_seconds"] = wall_seconds;
  manifest["summary"] = result.summary;

  const fs::path csv_tmp = out.string() + ".tmp";
  const fs::path manifest_tmp = manifest_path.string() + ".tmp";
  bool csv_published = false;
  try {
    write_file(csv_tmp, result.csv);
    write_file(manifest_tmp, manifest.dump(2) + "\n");
    fs::rename(csv_tmp, out);
    csv_published = true;
    fs::rename(manifest_tmp, manifest_path);
  } catch (...) {
    std::error_code ignored;
    fs::remove(csv_tmp, ignored);
    fs::remove(manifest_tmp, ignored);
    if (csv_published) fs::remove(out, ignored);
    throw;
  }
}

}  // namespace caplab::cli
