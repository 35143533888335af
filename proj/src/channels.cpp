#include "caplab/channels.hpp"

#include <string>

namespace caplab {

namespace {

void check_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidInput(std::string(where) + ": p must lie in [0, 1], got " + std::to_string(p));
  }
}

ComplexMatrix pauli(char which) {
  using C = std::complex<double>;
  ComplexMatrix m(2, 2);
  switch (which) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvalidInput("QuantumChannel: Kraus list is empty");
  out_dim_ = kraus_.front().rows();
  in_dim_ = kraus_.front().cols();
  if (in_dim_ == 0 || out_dim_ == 0) throw InvalidInput("QuantumChannel: zero-sized Kraus operator");
  ComplexMatrix completeness = ComplexMatrix::Zero(in_dim_, in_dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_) {
      throw InvalidInput("QuantumChannel: Kraus operators differ in shape");
    }
    completeness.noalias() += k.adjoint() * k;
  }
  const double dev = max_abs(completeness - ComplexMatrix::Identity(in_dim_, in_dim_));
  if (dev > tolerance::kCompleteness) {
    throw InvalidInput("QuantumChannel: Kraus operators are not trace preserving (deviation " +
                       std::to_string(dev) + ")");
  }
}

ComplexMatrix QuantumChannel::operator()(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(out_dim_, out_dim_);
  for (const auto& k : kraus_) out.noalias() += k * rho * k.adjoint();
  return out;
}

QuantumChannel make_channel(std::vector<ComplexMatrix> kraus) {
  return QuantumChannel(std::move(kraus));
}

DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.in_dim()) {
    throw InvalidInput("apply_channel: state dimension " + std::to_string(rho.dim()) +
                       " does not match channel input dimension " +
                       std::to_string(channel.in_dim()));
  }
  return DensityMatrix::trusted(channel(rho.matrix()));
}

ComplexMatrix dilation_isometry(const QuantumChannel& channel) {
  const Index k = static_cast<Index>(channel.kraus_count());
  const Index out = channel.out_dim();
  ComplexMatrix v = ComplexMatrix::Zero(out * k, channel.in_dim());
  for (Index i = 0; i < k; ++i) {
    const ComplexMatrix& ki = channel.kraus()[static_cast<std::size_t>(i)];
    for (Index b = 0; b < out; ++b) v.row(b * k + i) = ki.row(b);
  }
  return v;
}

QuantumChannel complementary_channel(const QuantumChannel& channel) {
  // F_b = sum_i |i><b| K_i, one operator per output basis state b.
  const Index k = static_cast<Index>(channel.kraus_count());
  std::vector<ComplexMatrix> env(static_cast<std::size_t>(channel.out_dim()),
                                 ComplexMatrix::Zero(k, channel.in_dim()));
  for (Index i = 0; i < k; ++i) {
    const ComplexMatrix& ki = channel.kraus()[static_cast<std::size_t>(i)];
    for (Index b = 0; b < channel.out_dim(); ++b) env[static_cast<std::size_t>(b)].row(i) = ki.row(b);
  }
  return QuantumChannel(std::move(env));
}

QuantumChannel identity_channel(Index n) {
  if (n < 1) throw InvalidInput("identity_channel: n must be >= 1");
  return QuantumChannel({ComplexMatrix::Identity(n, n)});
}

QuantumChannel erasure_channel(Index n, double p) {
  if (n < 1) throw InvalidInput("erasure_channel: n must be >= 1");
  check_probability(p, "erasure_channel");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(n) + 1);
  ComplexMatrix embed = ComplexMatrix::Zero(n + 1, n);
  embed.topRows(n).setIdentity();
  kraus.push_back(std::sqrt(1.0 - p) * embed);
  for (Index i = 0; i < n; ++i) {
    ComplexMatrix flag = ComplexMatrix::Zero(n + 1, n);
    flag(n, i) = std::sqrt(p);
    kraus.push_back(std::move(flag));
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel depolarizing_channel(double p) {
  check_probability(p, "depolarizing_channel");
  return QuantumChannel({std::sqrt(1.0 - 0.75 * p) * pauli('I'), std::sqrt(p / 4) * pauli('X'),
                         std::sqrt(p / 4) * pauli('Y'), std::sqrt(p / 4) * pauli('Z')});
}

QuantumChannel dephasing_channel(double p) {
  check_probability(p, "dephasing_channel");
  return QuantumChannel({std::sqrt(1.0 - p) * pauli('I'), std::sqrt(p) * pauli('Z')});
}

RetroInstance::RetroInstance(Index d, Index c, UnitaryMatrix basis,
                             std::vector<UnitaryMatrix> unitaries, std::uint64_t seed)
    : d_(d), c_(c), basis_(std::move(basis)), unitaries_(std::move(unitaries)), seed_(seed) {
  if (d_ < 1 || c_ < 1) throw InvalidInput("RetroInstance: d and c must be >= 1");
  if (basis_.dim() != c_) throw InvalidInput("RetroInstance: basis dimension must equal c");
  if (static_cast<Index>(unitaries_.size()) != c_) {
    throw InvalidInput("RetroInstance: expected exactly c unitaries");
  }
  for (const auto& u : unitaries_) {
    if (u.dim() != d_) throw InvalidInput("RetroInstance: unitary dimension must equal d");
  }
}

RetroInstance sample_retro_instance(Index d, Index c, std::uint64_t seed) {
  if (d < 2) throw InvalidInput("sample_retro_instance: d must be >= 2");
  if (c < 1) throw InvalidInput("sample_retro_instance: c must be >= 1");
  Rng rng(seed);
  UnitaryMatrix basis = random_basis(c, rng);
  std::vector<UnitaryMatrix> unitaries;
  unitaries.reserve(static_cast<std::size_t>(c));
  for (Index j = 0; j < c; ++j) unitaries.push_back(haar_unitary(d, rng));
  return RetroInstance(d, c, std::move(basis), std::move(unitaries), seed);
}

QuantumChannel retro_fixed_channel(const RetroInstance& instance) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(instance.c()));
  for (Index j = 0; j < instance.c(); ++j) {
    const ComplexMatrix bra = instance.basis().column(j).adjoint();
    kraus.push_back(tensor(instance.unitaries()[static_cast<std::size_t>(j)].matrix(), bra));
  }
  return QuantumChannel(std::move(kraus));
}

}  // namespace caplab
