#pragma once

#include "caplab/qmath.hpp"

#include <cstdint>
#include <vector>

namespace caplab {

namespace tolerance {
/// Maximum entry of sum K^dagger K - I accepted for a channel.
inline constexpr double kCompleteness = 1e-9;
}  // namespace tolerance

/// Completely positive trace-preserving map in Kraus form.
/// Every Kraus operator is out_dim x in_dim.
class QuantumChannel {
 public:
  /// Validates shape agreement and completeness.
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus);

  Index in_dim() const { return in_dim_; }
  Index out_dim() const { return out_dim_; }
  std::size_t kraus_count() const { return kraus_.size(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  /// sum_i K_i rho K_i^dagger on a raw matrix; no validation.
  ComplexMatrix operator()(const ComplexMatrix& rho) const;

 private:
  std::vector<ComplexMatrix> kraus_;
  Index in_dim_ = 0;
  Index out_dim_ = 0;
};

QuantumChannel make_channel(std::vector<ComplexMatrix> kraus);

DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho);

/// Stinespring isometry V = sum_i K_i (x) |i>_E, of shape (out_dim * k) x in_dim
/// with the output factor first.
ComplexMatrix dilation_isometry(const QuantumChannel& channel);

/// Channel onto the environment of the dilation; environment dimension is
/// the number of Kraus operators. Output entry (i, j) is Tr(K_j^dagger K_i rho).
QuantumChannel complementary_channel(const QuantumChannel& channel);

QuantumChannel identity_channel(Index n);

/// Transmits perfectly with probability 1-p, otherwise replaces the input by
/// a flag state stored as the extra level n of an (n+1)-dimensional output.
QuantumChannel erasure_channel(Index n, double p);

/// Qubit channel rho -> (1-p) rho + p I/2.
QuantumChannel depolarizing_channel(double p);

/// Qubit channel rho -> (1-p) rho + p Z rho Z.
QuantumChannel dephasing_channel(double p);

/// One realization of the retro-correctable channel: the hidden measurement
/// basis of the control input and the unitary applied for each outcome.
class RetroInstance {
 public:
  RetroInstance(Index d, Index c, UnitaryMatrix basis, std::vector<UnitaryMatrix> unitaries,
                std::uint64_t seed);

  Index d() const { return d_; }
  Index c() const { return c_; }
  const UnitaryMatrix& basis() const { return basis_; }
  const std::vector<UnitaryMatrix>& unitaries() const { return unitaries_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Index d_;
  Index c_;
  UnitaryMatrix basis_;
  std::vector<UnitaryMatrix> unitaries_;
  std::uint64_t seed_;
};

/// Draws the basis first, then U_1..U_c, from an Rng seeded with `seed`.
RetroInstance sample_retro_instance(Index d, Index c, std::uint64_t seed);

/// Channel on data (x) control with Kraus operators U_j (x) <b_j|. The
/// measurement outcome j is traced into the environment.
QuantumChannel retro_fixed_channel(const RetroInstance& instance);

}  // namespace caplab
