#pragma once

// Entropic capacity functionals and their numerical maximization.
//
// All maximizers return lower-bound estimates: the objectives are nonconvex,
// so the reported value is the functional evaluated at the returned argument
// and nothing more is claimed about global optimality.

#include "caplab/channels.hpp"
#include "caplab/qmath.hpp"

#include <span>
#include <variant>
#include <vector>

namespace caplab {

namespace tolerance {
inline constexpr double kProbabilitySum = 1e-10;
}  // namespace tolerance

struct WeightedState {
  double probability;
  DensityMatrix state;
};

/// Finite list of (probability, state) pairs with a common dimension.
class Ensemble {
 public:
  explicit Ensemble(std::vector<WeightedState> members);

  std::size_t size() const { return members_.size(); }
  Index dim() const { return members_.front().state.dim(); }
  const std::vector<WeightedState>& members() const { return members_; }

 private:
  std::vector<WeightedState> members_;
};

/// Classical-quantum state: branch k holds state rho_k with probability p_k;
/// `dims` annotates the quantum subsystems of every branch.
class CqState {
 public:
  CqState(std::vector<WeightedState> branches, DimVector dims);

  const std::vector<WeightedState>& branches() const { return branches_; }
  const DimVector& dims() const { return dims_; }

 private:
  std::vector<WeightedState> branches_;
  DimVector dims_;
};

/// Tunables of the alternating ascent. `ensemble_size == 0` selects in_dim^2.
struct AscentSettings {
  Index ensemble_size = 0;
  int restarts = 4;
  double tol = 1e-7;
  int max_iterations = 2000;
  double fd_step = 1e-5;
  /// Worker threads for independent restarts; results do not depend on it.
  int threads = 1;
  /// Record the objective after every iteration of the winning restart.
  bool keep_trajectory = false;
};

struct OptimizationReport {
  double value = 0.0;
  std::variant<Ensemble, DensityMatrix> argument;
  int restarts_used = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trajectory;
};

/// S(sum_i p_i N(rho_i)) - sum_i p_i S(N(rho_i)).
double holevo_quantity(const QuantumChannel& channel, const Ensemble& ensemble);

/// Mean of holevo_quantity over several channels for one shared ensemble.
/// This is the Holevo quantity of a channel that announces which member of
/// `channels` acted, each with equal probability.
double average_holevo_quantity(std::span<const QuantumChannel> channels, const Ensemble& ensemble);

/// holevo_quantity(N, e) - holevo_quantity(complement of N, e).
double private_information_quantity(const QuantumChannel& channel, const Ensemble& ensemble);

/// S(B) - S(AB), where A is subsystem `a_index` and B is everything else.
double coherent_information_state(const DensityMatrix& joint, const DimVector& dims,
                                  std::size_t a_index);

/// S(N(rho)) - S(complement of N (rho)).
double coherent_information_channel(const QuantumChannel& channel, const DensityMatrix& rho);

/// Branch-weighted average of coherent_information_state.
double conditional_coherent_info(const CqState& cq, std::size_t a_index);

/// Best Holevo quantity over pure-state ensembles.
OptimizationReport maximize_holevo(const QuantumChannel& channel, const AscentSettings& settings,
                                   Rng& rng);

/// Best average_holevo_quantity over pure-state ensembles shared by all channels.
OptimizationReport maximize_average_holevo(std::span<const QuantumChannel> channels,
                                           const AscentSettings& settings, Rng& rng);

/// Best private_information_quantity over pure-state ensembles.
OptimizationReport maximize_private(const QuantumChannel& channel, const AscentSettings& settings,
                                    Rng& rng);

/// Best coherent_information_channel over full-rank inputs LL^dagger / Tr(LL^dagger).
/// `ensemble_size` is ignored.
OptimizationReport maximize_coherent(const QuantumChannel& channel, const AscentSettings& settings,
                                     Rng& rng);

}  // namespace caplab
