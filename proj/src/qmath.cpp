#include "caplab/qmath.hpp"

namespace caplab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  // Fill in a fixed order so samples are reproducible.
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = {re, im};
    }
  }
  return g;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(splitmix64(master) ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
}

PureState max_entangled_state(Index d) {
  if (d < 1) throw InvalidInput("max_entangled_state: d must be >= 1");
  ComplexVector v = ComplexVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) v(i * d + i) = amp;
  return PureState(std::move(v));
}

UnitaryMatrix haar_unitary(Index n, Rng& rng) {
  if (n < 1) throw InvalidInput("haar_unitary: n must be >= 1");
  const ComplexMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0.0 ? rjj / mag : std::complex<double>(1.0);
  }
  return UnitaryMatrix(std::move(q));
}

UnitaryMatrix random_basis(Index n, Rng& rng) { return haar_unitary(n, rng); }

ComplexVector random_unit_vector(Index n, Rng& rng) {
  if (n < 1) throw InvalidInput("random_unit_vector: n must be >= 1");
  ComplexVector v = ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density_matrix(Index n, Rng& rng) {
  if (n < 1) throw InvalidInput("random_density_matrix: n must be >= 1");
  const ComplexMatrix g = ginibre(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::symmetrized(rho);
}

}  // namespace caplab
