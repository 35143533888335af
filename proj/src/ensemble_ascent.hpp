#pragma once

// Alternating ascent engines behind the capacity maximizers.

#include "caplab/capacities.hpp"

#include <cstdint>
#include <vector>

namespace caplab::detail {

/// One weighted Holevo term: weight * chi(channel, ensemble).
struct HolevoTerm {
  double weight;
  const QuantumChannel* channel;
};

struct EnsembleAscentResult {
  double value = 0.0;
  std::vector<ComplexVector> states;  // unit vectors
  Eigen::VectorXd probabilities;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trajectory;
};

/// Maximizes sum_t w_t chi(N_t, {p_i, |psi_i><psi_i|}) over m pure states and
/// their probabilities. Alternates a finite-difference gradient step on each
/// state (on the unit sphere) with a projected gradient step on the simplex.
/// Every accepted step strictly increases the objective.
EnsembleAscentResult run_ensemble_ascent(const std::vector<HolevoTerm>& terms, Index in_dim,
                                         Index ensemble_size, const AscentSettings& settings,
                                         std::uint64_t seed);

struct StateAscentResult {
  double value = 0.0;
  ComplexMatrix rho;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trajectory;
};

/// Maximizes S(N(rho)) - S(E(rho)) with rho = LL^dagger / Tr(LL^dagger) by
/// finite-difference gradient ascent on the entries of L.
StateAscentResult run_coherent_ascent(const QuantumChannel& channel,
                                      const QuantumChannel& complement,
                                      const AscentSettings& settings, std::uint64_t seed);

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

}  // namespace caplab::detail
