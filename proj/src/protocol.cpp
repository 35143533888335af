#include "caplab/protocol.hpp"

#include "caplab/capacities.hpp"
#include "caplab/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace caplab {

namespace {

/// Columns (I (x) U_j)|Phi_d> for j = 0..c-1.
ComplexMatrix rotated_entangled_vectors(const RetroInstance& inst) {
  const ComplexVector phi = max_entangled_state(inst.d()).amplitudes();
  ComplexMatrix out(inst.d() * inst.d(), inst.c());
  const ComplexMatrix id = ComplexMatrix::Identity(inst.d(), inst.d());
  for (Index j = 0; j < inst.c(); ++j) {
    out.col(j) = tensor(id, inst.unitaries()[static_cast<std::size_t>(j)].matrix()) * phi;
  }
  return out;
}

void check_rate_args(Index d, double p, double epsilon, double k_const, const char* where) {
  if (d < 3) throw InvalidInput(std::string(where) + ": d must be >= 3");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput(std::string(where) + ": p must lie in [0, 1]");
  if (!(epsilon > 0.0)) throw InvalidInput(std::string(where) + ": epsilon must be > 0");
  if (!(k_const > 0.0)) throw InvalidInput(std::string(where) + ": K must be > 0");
}

/// 4 log2 log2 d + log2(K / eps^2).
double erased_penalty(Index d, double epsilon, double k_const) {
  return 4.0 * std::log2(std::log2(static_cast<double>(d))) +
         std::log2(k_const / (epsilon * epsilon));
}

}  // namespace

ProtocolState protocol_state(const RetroInstance& instance, bool erased) {
  const Index d = instance.d();
  const Index c = instance.c();
  const ComplexMatrix phis = rotated_entangled_vectors(instance);
  if (erased) {
    return {DensityMatrix::trusted(phis * phis.adjoint() / static_cast<double>(c)), DimVector{d, d}};
  }
  ComplexMatrix joint(d * d * c, c);
  for (Index j = 0; j < c; ++j) {
    const ComplexVector collapsed = instance.basis().column(j).conjugate();
    joint.col(j) = tensor(phis.col(j), collapsed);
  }
  return {DensityMatrix::trusted(joint * joint.adjoint() / static_cast<double>(c)),
          DimVector{d, d, c}};
}

BranchValues branch_coherent_infos(const RetroInstance& instance) {
  const ProtocolState kept = protocol_state(instance, false);
  const ProtocolState lost = protocol_state(instance, true);
  BranchValues out;
  out.not_erased = coherent_information_state(kept.state, kept.dims, 0);
  out.erased = coherent_information_state(lost.state, lost.dims, 0);
  out.instance_seed = instance.seed();
  out.d = instance.d();
  out.c = instance.c();

  const double log_d = std::log2(static_cast<double>(instance.d()));
  const double log_c = std::log2(static_cast<double>(instance.c()));
  if (std::abs(out.not_erased - log_d) > 1e-9) {
    throw std::logic_error("branch_coherent_infos: unerased branch " +
                           std::to_string(out.not_erased) + " differs from log2 d");
  }
  if (out.erased < log_d - log_c - 1e-9) {
    throw std::logic_error("branch_coherent_infos: erased branch below log2 d - log2 c");
  }
  return out;
}

ProtocolEstimate combine_branches(std::vector<BranchValues> branches, double p,
                                  std::uint64_t master_seed) {
  if (branches.empty()) throw InvalidInput("combine_branches: no trials");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("combine_branches: p must lie in [0, 1]");
  ProtocolEstimate est;
  est.d = branches.front().d;
  est.c = branches.front().c;
  est.p = p;
  est.trials = static_cast<int>(branches.size());
  est.master_seed = master_seed;

  const double n = static_cast<double>(branches.size());
  double sum_joint = 0.0;
  double sum_erased = 0.0;
  for (const auto& b : branches) {
    sum_joint += (1.0 - p) * b.not_erased + p * b.erased;
    sum_erased += b.erased;
  }
  est.mean_joint = sum_joint / n;
  est.mean_erased = sum_erased / n;
  if (branches.size() > 1) {
    double ss = 0.0;
    for (const auto& b : branches) {
      const double dev = (1.0 - p) * b.not_erased + p * b.erased - est.mean_joint;
      ss += dev * dev;
    }
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  est.per_trial = std::move(branches);
  return est;
}

std::vector<BranchValues> sample_branches(Index d, Index c, int trials, std::uint64_t master_seed,
                                          int threads) {
  if (d < 2) throw InvalidInput("sample_branches: d must be >= 2");
  if (c < 1) throw InvalidInput("sample_branches: c must be >= 1");
  if (trials < 1) throw InvalidInput("sample_branches: trials must be >= 1");
  std::vector<BranchValues> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), threads, [&](std::size_t k) {
    out[k] = branch_coherent_infos(sample_retro_instance(d, c, derive_seed(master_seed, k)));
  });
  return out;
}

ProtocolEstimate joint_coherent_info(Index d, Index c, double p, int trials,
                                     std::uint64_t master_seed, int threads) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("joint_coherent_info: p must lie in [0, 1]");
  return combine_branches(sample_branches(d, c, trials, master_seed, threads), p, master_seed);
}

double asymptotic_rate_bound(Index d, double p, double epsilon, double k_const) {
  check_rate_args(d, p, epsilon, k_const, "asymptotic_rate_bound");
  return (1.0 - p) * std::log2(static_cast<double>(d)) - p * erased_penalty(d, epsilon, k_const);
}

bool rate_bound_positive(Index d, double p, double epsilon, double k_const) {
  check_rate_args(d, p, epsilon, k_const, "rate_bound_positive");
  if (p == 0.0) throw InvalidInput("rate_bound_positive: p must be > 0");
  return (1.0 - p) / p > erased_penalty(d, epsilon, k_const) / std::log2(static_cast<double>(d));
}

Index prescribed_control_dim(Index d, double epsilon, double k_const) {
  if (d < 2) throw InvalidInput("prescribed_control_dim: d must be >= 2");
  if (!(epsilon > 0.0)) throw InvalidInput("prescribed_control_dim: epsilon must be > 0");
  if (!(k_const > 0.0)) throw InvalidInput("prescribed_control_dim: K must be > 0");
  const double log_d = std::log2(static_cast<double>(d));
  const double c = k_const / (epsilon * epsilon) * static_cast<double>(d) * std::pow(log_d, 4);
  // Shave one part in 1e12 so exact products are not rounded up by noise.
  return static_cast<Index>(std::ceil(c * (1.0 - 1e-12)));
}

}  // namespace caplab
