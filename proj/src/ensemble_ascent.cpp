#include "ensemble_ascent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace caplab::detail {

namespace {

constexpr int kMaxLineSearch = 40;
constexpr double kMaxStep = 1e4;
constexpr double kInitialStep = 1.0;

/// Kraus operators of one term stacked vertically: rows [j*out, (j+1)*out)
/// hold K_j, so stacked * x reshaped to out x k has K_j x as column j.
struct TermCache {
  double weight;
  Index out;
  Index kraus;
  ComplexMatrix stacked;
};

TermCache make_cache(const HolevoTerm& term) {
  const QuantumChannel& ch = *term.channel;
  TermCache t{term.weight, ch.out_dim(), static_cast<Index>(ch.kraus_count()),
              ComplexMatrix(ch.out_dim() * static_cast<Index>(ch.kraus_count()), ch.in_dim())};
  for (Index j = 0; j < t.kraus; ++j) {
    t.stacked.middleRows(j * t.out, t.out) = ch.kraus()[static_cast<std::size_t>(j)];
  }
  return t;
}

ComplexMatrix output_from_images(const TermCache& t, const ComplexVector& images, double norm2) {
  Eigen::Map<const ComplexMatrix> a(images.data(), t.out, t.kraus);
  return (a * a.adjoint()) / norm2;
}

class EnsembleAscent {
 public:
  EnsembleAscent(const std::vector<HolevoTerm>& terms, Index in_dim, Index m,
                 const AscentSettings& settings, std::uint64_t seed)
      : in_dim_(in_dim), m_(m), settings_(settings) {
    for (const auto& term : terms) caches_.push_back(make_cache(term));
    Rng rng(seed);
    states_.reserve(static_cast<std::size_t>(m_));
    for (Index i = 0; i < m_; ++i) states_.push_back(random_unit_vector(in_dim_, rng));
    probs_ = Eigen::VectorXd::Constant(m_, 1.0 / static_cast<double>(m_));
    step_.assign(static_cast<std::size_t>(m_), kInitialStep);

    const std::size_t nt = caches_.size();
    sigma_.assign(nt, std::vector<ComplexMatrix>(static_cast<std::size_t>(m_)));
    ent_.assign(nt, std::vector<double>(static_cast<std::size_t>(m_), 0.0));
    avg_.resize(nt);
    avg_ent_.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      for (Index i = 0; i < m_; ++i) set_output(t, static_cast<std::size_t>(i),
                                                output_of(t, states_[static_cast<std::size_t>(i)]));
    }
    refresh();
  }

  EnsembleAscentResult run() {
    EnsembleAscentResult result;
    if (settings_.keep_trajectory) result.trajectory.push_back(value_);
    for (int it = 1; it <= settings_.max_iterations; ++it) {
      const double before = value_;
      for (Index i = 0; i < m_; ++i) state_step(static_cast<std::size_t>(i));
      probability_step();
      refresh();
      result.iterations = it;
      if (settings_.keep_trajectory) result.trajectory.push_back(value_);
      if (value_ - before < settings_.tol) {
        result.converged = true;
        break;
      }
    }
    result.value = value_;
    result.states = states_;
    result.probabilities = probs_;
    return result;
  }

 private:
  ComplexMatrix output_of(std::size_t t, const ComplexVector& x) const {
    const ComplexVector images = caches_[t].stacked * x;
    return output_from_images(caches_[t], images, x.squaredNorm());
  }

  void set_output(std::size_t t, std::size_t i, ComplexMatrix s) {
    ent_[t][i] = entropy_bits(s);
    sigma_[t][i] = std::move(s);
  }

  /// Recomputes averages and the objective from the cached outputs.
  void refresh() {
    value_ = 0.0;
    for (std::size_t t = 0; t < caches_.size(); ++t) {
      avg_[t] = ComplexMatrix::Zero(caches_[t].out, caches_[t].out);
      double mixed = 0.0;
      for (Index i = 0; i < m_; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        avg_[t] += probs_(i) * sigma_[t][ii];
        mixed += probs_(i) * ent_[t][ii];
      }
      avg_ent_[t] = entropy_bits(avg_[t]);
      value_ += caches_[t].weight * (avg_ent_[t] - mixed);
    }
  }

  /// The part of the objective that depends on state i, with state i's
  /// outputs replaced by `outputs`.
  double local_value(std::size_t i, const std::vector<ComplexMatrix>& outputs) const {
    const double p = probs_(static_cast<Index>(i));
    double v = 0.0;
    for (std::size_t t = 0; t < caches_.size(); ++t) {
      const ComplexMatrix mixed = avg_[t] + p * (outputs[t] - sigma_[t][i]);
      v += caches_[t].weight * (entropy_bits(mixed) - p * entropy_bits(outputs[t]));
    }
    return v;
  }

  double current_local_value(std::size_t i) const {
    const double p = probs_(static_cast<Index>(i));
    double v = 0.0;
    for (std::size_t t = 0; t < caches_.size(); ++t) {
      v += caches_[t].weight * (avg_ent_[t] - p * ent_[t][i]);
    }
    return v;
  }

  void state_step(std::size_t i) {
    if (probs_(static_cast<Index>(i)) <= 0.0) return;
    const ComplexVector& x = states_[i];
    const std::size_t nt = caches_.size();
    const double h = settings_.fd_step;

    std::vector<ComplexVector> images(nt);
    for (std::size_t t = 0; t < nt; ++t) images[t] = caches_[t].stacked * x;

    std::vector<ComplexMatrix> trial(nt);
    auto perturbed = [&](Index q, std::complex<double> delta) {
      const double norm2 = 1.0 + 2.0 * std::real(std::conj(x(q)) * delta) + std::norm(delta);
      for (std::size_t t = 0; t < nt; ++t) {
        const ComplexVector shifted = images[t] + delta * caches_[t].stacked.col(q);
        trial[t] = output_from_images(caches_[t], shifted, norm2);
      }
      return local_value(i, trial);
    };

    ComplexVector grad(in_dim_);
    for (Index q = 0; q < in_dim_; ++q) {
      const double d_re = (perturbed(q, {h, 0.0}) - perturbed(q, {-h, 0.0})) / (2.0 * h);
      const double d_im = (perturbed(q, {0.0, h}) - perturbed(q, {0.0, -h})) / (2.0 * h);
      grad(q) = {d_re, d_im};
    }
    if (!(grad.norm() > 1e-14)) return;

    const double base = current_local_value(i);
    double eta = step_[i];
    for (int ls = 0; ls < kMaxLineSearch; ++ls, eta *= 0.5) {
      ComplexVector candidate = x + eta * grad;
      candidate /= candidate.norm();
      for (std::size_t t = 0; t < nt; ++t) trial[t] = output_of(t, candidate);
      const double v = local_value(i, trial);
      if (v > base) {
        states_[i] = std::move(candidate);
        value_ += v - base;
        const double p = probs_(static_cast<Index>(i));
        for (std::size_t t = 0; t < nt; ++t) {
          avg_[t] += p * (trial[t] - sigma_[t][i]);
          avg_ent_[t] = entropy_bits(avg_[t]);
          set_output(t, i, std::move(trial[t]));
        }
        step_[i] = std::min(2.0 * eta, kMaxStep);
        return;
      }
    }
    step_[i] = kInitialStep;
  }

  double value_at(const Eigen::VectorXd& probs) const {
    double v = 0.0;
    for (std::size_t t = 0; t < caches_.size(); ++t) {
      ComplexMatrix mixed = ComplexMatrix::Zero(caches_[t].out, caches_[t].out);
      double weighted = 0.0;
      for (Index i = 0; i < m_; ++i) {
        mixed += probs(i) * sigma_[t][static_cast<std::size_t>(i)];
        weighted += probs(i) * ent_[t][static_cast<std::size_t>(i)];
      }
      v += caches_[t].weight * (entropy_bits(mixed) - weighted);
    }
    return v;
  }

  void probability_step() {
    if (m_ < 2) return;
    const double h = settings_.fd_step;
    // Objective change when p_i alone moves by delta (off the simplex).
    auto shifted = [&](std::size_t i, double delta) {
      double v = 0.0;
      for (std::size_t t = 0; t < caches_.size(); ++t) {
        v += caches_[t].weight *
             (entropy_bits(avg_[t] + delta * sigma_[t][i]) - delta * ent_[t][i]);
      }
      return v;
    };
    Eigen::VectorXd grad(m_);
    for (Index i = 0; i < m_; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      grad(i) = probs_(i) >= h ? (shifted(ii, h) - shifted(ii, -h)) / (2.0 * h)
                               : (shifted(ii, h) - shifted(ii, 0.0)) / h;
    }
    const double base = value_;
    double eta = prob_step_;
    for (int ls = 0; ls < kMaxLineSearch; ++ls, eta *= 0.5) {
      const Eigen::VectorXd candidate = project_to_simplex(probs_ + eta * grad);
      if ((candidate - probs_).cwiseAbs().maxCoeff() < 1e-15) break;
      const double v = value_at(candidate);
      if (v > base) {
        probs_ = candidate;
        value_ = v;
        prob_step_ = std::min(2.0 * eta, kMaxStep);
        return;
      }
    }
    prob_step_ = kInitialStep;
  }

  Index in_dim_;
  Index m_;
  AscentSettings settings_;
  std::vector<TermCache> caches_;
  std::vector<ComplexVector> states_;
  Eigen::VectorXd probs_;
  std::vector<double> step_;
  double prob_step_ = kInitialStep;
  std::vector<std::vector<ComplexMatrix>> sigma_;
  std::vector<std::vector<double>> ent_;
  std::vector<ComplexMatrix> avg_;
  std::vector<double> avg_ent_;
  double value_ = 0.0;
};

double coherent_value(const QuantumChannel& channel, const QuantumChannel& complement,
                      const ComplexMatrix& l) {
  ComplexMatrix rho = l * l.adjoint();
  rho /= rho.trace().real();
  return entropy_bits(channel(rho)) - entropy_bits(complement(rho));
}

}  // namespace

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Index n = v.size();
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  Eigen::VectorXd out = (v.array() - theta).max(0.0).matrix();
  return out / out.sum();
}

EnsembleAscentResult run_ensemble_ascent(const std::vector<HolevoTerm>& terms, Index in_dim,
                                         Index ensemble_size, const AscentSettings& settings,
                                         std::uint64_t seed) {
  return EnsembleAscent(terms, in_dim, ensemble_size, settings, seed).run();
}

StateAscentResult run_coherent_ascent(const QuantumChannel& channel,
                                      const QuantumChannel& complement,
                                      const AscentSettings& settings, std::uint64_t seed) {
  const Index n = channel.in_dim();
  const double h = settings.fd_step;
  Rng rng(seed);
  ComplexMatrix l(n, n);
  for (Index c = 0; c < n; ++c) l.col(c) = random_unit_vector(n, rng);
  l /= l.norm();

  StateAscentResult result;
  double value = coherent_value(channel, complement, l);
  if (settings.keep_trajectory) result.trajectory.push_back(value);
  double eta = kInitialStep;
  ComplexMatrix grad(n, n);
  for (int it = 1; it <= settings.max_iterations; ++it) {
    const double before = value;
    for (Index c = 0; c < n; ++c) {
      for (Index r = 0; r < n; ++r) {
        double d[2];
        for (int part = 0; part < 2; ++part) {
          const std::complex<double> delta = part == 0 ? std::complex<double>(h, 0.0)
                                                       : std::complex<double>(0.0, h);
          ComplexMatrix lp = l;
          lp(r, c) += delta;
          ComplexMatrix lm = l;
          lm(r, c) -= delta;
          d[part] = (coherent_value(channel, complement, lp) -
                     coherent_value(channel, complement, lm)) / (2.0 * h);
        }
        grad(r, c) = {d[0], d[1]};
      }
    }
    bool accepted = false;
    if (grad.norm() > 1e-14) {
      for (int ls = 0; ls < kMaxLineSearch; ++ls, eta *= 0.5) {
        ComplexMatrix candidate = l + eta * grad;
        candidate /= candidate.norm();
        const double v = coherent_value(channel, complement, candidate);
        if (v > value) {
          l = std::move(candidate);
          value = v;
          eta = std::min(2.0 * eta, kMaxStep);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) eta = kInitialStep;
    result.iterations = it;
    if (settings.keep_trajectory) result.trajectory.push_back(value);
    if (value - before < settings.tol) {
      result.converged = true;
      break;
    }
  }
  result.value = value;
  result.rho = l * l.adjoint();
  result.rho /= result.rho.trace().real();
  return result;
}

}  // namespace caplab::detail
