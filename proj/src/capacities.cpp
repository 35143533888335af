#include "caplab/capacities.hpp"

#include "caplab/parallel.hpp"
#include "ensemble_ascent.hpp"

#include <cmath>
#include <string>

namespace caplab {

namespace {

void check_weights(const std::vector<WeightedState>& members, const char* what) {
  if (members.empty()) throw InvalidInput(std::string(what) + ": no members");
  double total = 0.0;
  const Index dim = members.front().state.dim();
  for (const auto& m : members) {
    if (!(m.probability >= 0.0)) throw InvalidInput(std::string(what) + ": negative probability");
    if (m.state.dim() != dim) throw InvalidInput(std::string(what) + ": state dimensions differ");
    total += m.probability;
  }
  if (std::abs(total - 1.0) > tolerance::kProbabilitySum) {
    throw InvalidInput(std::string(what) + ": probabilities do not sum to 1");
  }
}

void check_input_dim(const QuantumChannel& channel, Index dim, const char* where) {
  if (dim != channel.in_dim()) {
    throw InvalidInput(std::string(where) + ": state dimension " + std::to_string(dim) +
                       " does not match channel input dimension " +
                       std::to_string(channel.in_dim()));
  }
}

void check_settings(const AscentSettings& s) {
  if (s.restarts < 1) throw InvalidInput("AscentSettings: restarts must be >= 1");
  if (s.max_iterations < 1) throw InvalidInput("AscentSettings: max_iterations must be >= 1");
  if (s.ensemble_size < 0) throw InvalidInput("AscentSettings: ensemble_size must be >= 0");
  if (!(s.tol >= 0.0)) throw InvalidInput("AscentSettings: tol must be >= 0");
  if (!(s.fd_step > 0.0)) throw InvalidInput("AscentSettings: fd_step must be > 0");
}

Ensemble to_ensemble(const detail::EnsembleAscentResult& r) {
  std::vector<WeightedState> members;
  members.reserve(r.states.size());
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    members.push_back({r.probabilities(static_cast<Index>(i)),
                       DensityMatrix::trusted(r.states[i] * r.states[i].adjoint())});
  }
  return Ensemble(std::move(members));
}

/// Runs the restarts, keeps the best (lowest index on ties) and re-evaluates
/// the objective at the winning ensemble with `certify`.
template <typename Certify>
OptimizationReport best_ensemble(const std::vector<detail::HolevoTerm>& terms, Index in_dim,
                                 const AscentSettings& settings, Rng& rng, Certify&& certify) {
  check_settings(settings);
  const Index m = settings.ensemble_size > 0 ? settings.ensemble_size : in_dim * in_dim;
  const std::uint64_t master = rng();
  std::vector<detail::EnsembleAscentResult> runs(static_cast<std::size_t>(settings.restarts));
  parallel_for(runs.size(), settings.threads, [&](std::size_t k) {
    runs[k] = detail::run_ensemble_ascent(terms, in_dim, m, settings, derive_seed(master, k));
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].value > runs[best].value) best = k;
  }
  Ensemble ensemble = to_ensemble(runs[best]);
  OptimizationReport report{certify(ensemble), std::move(ensemble), settings.restarts,
                            runs[best].iterations, runs[best].converged,
                            std::move(runs[best].trajectory)};
  return report;
}

}  // namespace

Ensemble::Ensemble(std::vector<WeightedState> members) : members_(std::move(members)) {
  check_weights(members_, "Ensemble");
}

CqState::CqState(std::vector<WeightedState> branches, DimVector dims)
    : branches_(std::move(branches)), dims_(std::move(dims)) {
  check_weights(branches_, "CqState");
  if (branches_.front().state.dim() != dims_.total()) {
    throw InvalidInput("CqState: dims do not match the branch state dimension");
  }
}

double holevo_quantity(const QuantumChannel& channel, const Ensemble& ensemble) {
  check_input_dim(channel, ensemble.dim(), "holevo_quantity");
  ComplexMatrix average = ComplexMatrix::Zero(channel.out_dim(), channel.out_dim());
  double mixed = 0.0;
  for (const auto& m : ensemble.members()) {
    const ComplexMatrix out = channel(m.state.matrix());
    average += m.probability * out;
    mixed += m.probability * entropy_bits(out);
  }
  return entropy_bits(average) - mixed;
}

double average_holevo_quantity(std::span<const QuantumChannel> channels, const Ensemble& ensemble) {
  if (channels.empty()) throw InvalidInput("average_holevo_quantity: no channels");
  double total = 0.0;
  for (const auto& ch : channels) total += holevo_quantity(ch, ensemble);
  return total / static_cast<double>(channels.size());
}

double private_information_quantity(const QuantumChannel& channel, const Ensemble& ensemble) {
  check_input_dim(channel, ensemble.dim(), "private_information_quantity");
  return holevo_quantity(channel, ensemble) -
         holevo_quantity(complementary_channel(channel), ensemble);
}

double coherent_information_state(const DensityMatrix& joint, const DimVector& dims,
                                  std::size_t a_index) {
  if (dims.total() != joint.dim()) {
    throw InvalidInput("coherent_information_state: dims do not match the state dimension");
  }
  if (a_index >= dims.size()) throw InvalidInput("coherent_information_state: a_index out of range");
  if (dims.size() < 2) throw InvalidInput("coherent_information_state: need at least two subsystems");
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k != a_index) rest.push_back(k);
  }
  const ComplexMatrix b = partial_trace(joint.matrix(), dims, rest);
  return entropy_bits(b) - entropy_bits(joint.matrix());
}

double coherent_information_channel(const QuantumChannel& channel, const DensityMatrix& rho) {
  check_input_dim(channel, rho.dim(), "coherent_information_channel");
  return entropy_bits(channel(rho.matrix())) -
         entropy_bits(complementary_channel(channel)(rho.matrix()));
}

double conditional_coherent_info(const CqState& cq, std::size_t a_index) {
  double total = 0.0;
  for (const auto& branch : cq.branches()) {
    if (branch.probability == 0.0) continue;
    total += branch.probability * coherent_information_state(branch.state, cq.dims(), a_index);
  }
  return total;
}

OptimizationReport maximize_holevo(const QuantumChannel& channel, const AscentSettings& settings,
                                   Rng& rng) {
  return best_ensemble({{1.0, &channel}}, channel.in_dim(), settings, rng,
                       [&](const Ensemble& e) { return holevo_quantity(channel, e); });
}

OptimizationReport maximize_average_holevo(std::span<const QuantumChannel> channels,
                                           const AscentSettings& settings, Rng& rng) {
  if (channels.empty()) throw InvalidInput("maximize_average_holevo: no channels");
  const Index in_dim = channels.front().in_dim();
  std::vector<detail::HolevoTerm> terms;
  for (const auto& ch : channels) {
    if (ch.in_dim() != in_dim) throw InvalidInput("maximize_average_holevo: input dimensions differ");
    terms.push_back({1.0 / static_cast<double>(channels.size()), &ch});
  }
  return best_ensemble(terms, in_dim, settings, rng,
                       [&](const Ensemble& e) { return average_holevo_quantity(channels, e); });
}

OptimizationReport maximize_private(const QuantumChannel& channel, const AscentSettings& settings,
                                    Rng& rng) {
  const QuantumChannel complement = complementary_channel(channel);
  return best_ensemble({{1.0, &channel}, {-1.0, &complement}}, channel.in_dim(), settings, rng,
                       [&](const Ensemble& e) { return private_information_quantity(channel, e); });
}

OptimizationReport maximize_coherent(const QuantumChannel& channel, const AscentSettings& settings,
                                     Rng& rng) {
  check_settings(settings);
  const QuantumChannel complement = complementary_channel(channel);
  const std::uint64_t master = rng();
  std::vector<detail::StateAscentResult> runs(static_cast<std::size_t>(settings.restarts));
  parallel_for(runs.size(), settings.threads, [&](std::size_t k) {
    runs[k] = detail::run_coherent_ascent(channel, complement, settings, derive_seed(master, k));
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].value > runs[best].value) best = k;
  }
  DensityMatrix rho = DensityMatrix::symmetrized(runs[best].rho);
  const double value = coherent_information_channel(channel, rho);
  return OptimizationReport{value, std::move(rho), settings.restarts, runs[best].iterations,
                            runs[best].converged, std::move(runs[best].trajectory)};
}

}  // namespace caplab
