#pragma once

// Exact simulation of the joint coding scheme that pairs a retro-correctable
// channel with an erasure channel.
//
// Alice sends half of a d x d maximally entangled state (reference A) into
// the data input and half of a c x c maximally entangled state into the
// control input; the other control half F goes through the erasure channel
// and arrives as B3. The classical announcement (basis and unitaries) is
// handled by conditioning on a RetroInstance; the erasure flag by branching.

#include "caplab/channels.hpp"
#include "caplab/qmath.hpp"

#include <cstdint>
#include <vector>

namespace caplab {

/// Joint state of the protocol for one instance, with subsystem dims.
/// Unerased: A (x) B1 (x) B3 with dims (d, d, c). Erased: A (x) B1 with dims (d, d).
struct ProtocolState {
  DensityMatrix state;
  DimVector dims;
};

/// Coherent information of each erasure branch for one instance.
struct BranchValues {
  double not_erased = 0.0;
  double erased = 0.0;
  std::uint64_t instance_seed = 0;
  Index d = 0;
  Index c = 0;
};

struct ProtocolEstimate {
  Index d = 0;
  Index c = 0;
  double p = 0.0;
  int trials = 0;
  double mean_joint = 0.0;
  double std_error = 0.0;
  double mean_erased = 0.0;
  std::vector<BranchValues> per_trial;
  std::uint64_t master_seed = 0;
};

/// Builds the conditional joint state of the protocol.
///
/// When F arrives, Bob holds the post-measurement control register: the
/// channel measured F' in basis {b_j}, which collapses F onto the conjugate
/// vector conj(b_j). The unerased state is therefore
/// (1/c) sum_j Phi_j (x) |conj(b_j)><conj(b_j)| with Phi_j = (I (x) U_j) Phi_d (I (x) U_j)^dagger.
/// When F is erased, the control input is effectively maximally mixed and the
/// state is (1/c) sum_j Phi_j.
ProtocolState protocol_state(const RetroInstance& instance, bool erased);

/// Coherent information of both branches with A as reference, computed from
/// protocol_state. Throws std::logic_error if the unerased value departs from
/// log2 d by more than 1e-9 or the erased value falls below log2 d - log2 c.
BranchValues branch_coherent_infos(const RetroInstance& instance);

/// Combines per-instance branch values at erasure probability p:
/// joint_k = (1 - p) not_erased_k + p erased_k.
ProtocolEstimate combine_branches(std::vector<BranchValues> branches, double p,
                                  std::uint64_t master_seed);

/// Branch values for `trials` instances, trial k drawn with seed derive_seed(master_seed, k).
std::vector<BranchValues> sample_branches(Index d, Index c, int trials, std::uint64_t master_seed,
                                          int threads = 1);

/// Monte-Carlo estimate of the joint coherent information of the protocol.
ProtocolEstimate joint_coherent_info(Index d, Index c, double p, int trials,
                                     std::uint64_t master_seed, int threads = 1);

/// (1-p) log2 d - p (4 log2 log2 d + log2(K / eps^2)). Requires d >= 3.
double asymptotic_rate_bound(Index d, double p, double epsilon, double k_const);

/// Whether (1-p)/p > (4 log2 log2 d + log2(K/eps^2)) / log2 d. Requires p > 0.
bool rate_bound_positive(Index d, double p, double epsilon, double k_const);

/// ceil((K / eps^2) d (log2 d)^4), the control dimension used by the
/// asymptotic construction.
Index prescribed_control_dim(Index d, double epsilon, double k_const);

}  // namespace caplab
