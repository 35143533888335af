#include "caplab/qmath.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace caplab {
namespace {

using testing::diag;
using testing::max_diff;
using testing::random_complex_matrix;

TEST(Tensor, IdentityTimesIdentity) {
  const ComplexMatrix out = tensor(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3));
  EXPECT_EQ(max_diff(out, ComplexMatrix::Identity(6, 6)), 0.0);
}

TEST(Tensor, BasisProjectors) {
  EXPECT_EQ(max_diff(tensor(diag({1, 0}), diag({0, 1})), diag({0, 1, 0, 0})), 0.0);
}

TEST(Tensor, MatchesIndexFormula) {
  Rng rng(11);
  const ComplexMatrix a = random_complex_matrix(2, 2, rng);
  const ComplexMatrix b = random_complex_matrix(2, 2, rng);
  const ComplexMatrix out = tensor(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) EXPECT_EQ(out(i * 2 + k, j * 2 + l), a(i, j) * b(k, l));
}

TEST(Tensor, AssociativeExactly) {
  Rng rng(12);
  const ComplexMatrix a = random_complex_matrix(2, 3, rng);
  const ComplexMatrix b = random_complex_matrix(3, 2, rng);
  const ComplexMatrix c = random_complex_matrix(2, 2, rng);
  // Entry products are formed in different groupings, so allow one ulp-scale slack.
  EXPECT_LT(max_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))), 1e-14);
}

TEST(PartialTrace, ProductStateKeepsFactor) {
  Rng rng(21);
  const DensityMatrix rho = random_density_matrix(2, rng);
  const DensityMatrix sigma = random_density_matrix(3, rng);
  const DensityMatrix joint = tensor(rho, sigma);
  EXPECT_LT(max_diff(partial_trace(joint, {2, 3}, {0}).matrix(), rho.matrix()), 1e-12);
  EXPECT_LT(max_diff(partial_trace(joint, {2, 3}, {1}).matrix(), sigma.matrix()), 1e-12);
}

TEST(PartialTrace, BellStateMarginalsAreMaximallyMixed) {
  const DensityMatrix bell = max_entangled_state(2).projector();
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  EXPECT_LT(max_diff(partial_trace(bell, {2, 2}, {0}).matrix(), half), 1e-12);
  EXPECT_LT(max_diff(partial_trace(bell, {2, 2}, {1}).matrix(), half), 1e-12);
}

TEST(PartialTrace, MatchesNaiveIndexSum) {
  Rng rng(22);
  const DensityMatrix rho = random_density_matrix(12, rng);
  // dims (2, 2, 3), keep {0, 2}: reduced(a c, a' c') = sum_b rho(a b c, a' b c').
  ComplexMatrix oracle = ComplexMatrix::Zero(6, 6);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 3; ++c)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c2 = 0; c2 < 3; ++c2)
          for (int b = 0; b < 2; ++b)
            oracle(a * 3 + c, a2 * 3 + c2) += rho(a * 6 + b * 3 + c, a2 * 6 + b * 3 + c2);
  const DensityMatrix reduced = partial_trace(rho, {2, 2, 3}, {2, 0});
  EXPECT_LT(max_diff(reduced.matrix(), oracle), 1e-14);
  EXPECT_NEAR(reduced.matrix().trace().real(), 1.0, 1e-12);
}

TEST(PartialTrace, ComposesWithTensor) {
  Rng rng(23);
  const ComplexMatrix rho = random_complex_matrix(3, 3, rng);
  const ComplexMatrix sigma = random_complex_matrix(2, 2, rng);
  const ComplexMatrix reduced = partial_trace(tensor(rho, sigma), DimVector{3, 2}, {0});
  EXPECT_LT(max_diff(reduced, rho * sigma.trace()), 1e-10);
}

TEST(PartialTrace, RejectsBadArguments) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  EXPECT_THROW(partial_trace(rho, {2, 3}, {0}), InvalidInput);
  EXPECT_THROW(partial_trace(rho, {2, 2}, {}), InvalidInput);
  EXPECT_THROW(partial_trace(rho, {2, 2}, {2}), InvalidInput);
  EXPECT_THROW(partial_trace(rho, {2, 2}, {0, 0}), InvalidInput);
}

TEST(DimVectorTest, Validation) {
  EXPECT_THROW(DimVector({2, 0}), InvalidInput);
  EXPECT_THROW(DimVector(std::vector<Index>{}), InvalidInput);
  EXPECT_EQ(DimVector({2, 3, 4}).total(), 24);
}

TEST(Entropy, PureStateIsZero) {
  Rng rng(31);
  const ComplexVector v = random_unit_vector(5, rng);
  EXPECT_NEAR(von_neumann_entropy(PureState(v).projector()), 0.0, 1e-10);
}

TEST(Entropy, MaximallyMixed) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(4)), 2.0, 1e-12);
}

TEST(Entropy, HandEvaluatedSpectrum) {
  // -(0.5 log2 0.5 + 2 * 0.25 log2 0.25) = 0.5 + 1.0
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(diag({0.5, 0.25, 0.25}))), 1.5, 1e-12);
}

TEST(Entropy, QubitClosedFormAgreesWithEigensolver) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix q = random_density_matrix(2, rng);
    // Embed in a 3-level space with an empty level to force the general path.
    ComplexMatrix big = ComplexMatrix::Zero(3, 3);
    big.topLeftCorner(2, 2) = q.matrix();
    EXPECT_NEAR(entropy_bits(q.matrix()), entropy_bits(big), 1e-12);
  }
}

TEST(Entropy, UnitaryInvariance) {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density_matrix(4, rng);
    const ComplexMatrix u = haar_unitary(4, rng).matrix();
    const DensityMatrix rotated = DensityMatrix::symmetrized(u * rho.matrix() * u.adjoint());
    EXPECT_NEAR(von_neumann_entropy(rotated), von_neumann_entropy(rho), 1e-9);
  }
}

TEST(Entropy, AdditiveOnProducts) {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density_matrix(3, rng);
    const DensityMatrix sigma = random_density_matrix(2, rng);
    EXPECT_NEAR(von_neumann_entropy(tensor(rho, sigma)),
                von_neumann_entropy(rho) + von_neumann_entropy(sigma), 1e-9);
  }
}

TEST(Entropy, InRange) {
  Rng rng(35);
  for (Index n = 1; n <= 6; ++n) {
    const double s = von_neumann_entropy(random_density_matrix(n, rng));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, std::log2(static_cast<double>(n)) + 1e-12);
  }
}

TEST(DensityMatrixTest, RejectsInvariantViolations) {
  ComplexMatrix not_hermitian = diag({0.5, 0.5});
  not_hermitian(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{not_hermitian}, InvalidInput);
  EXPECT_THROW(DensityMatrix(diag({1.5, -0.5})), InvalidInput);
  EXPECT_THROW(DensityMatrix(diag({0.5, 0.4})), InvalidInput);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Zero(2, 3)), InvalidInput);
  EXPECT_NO_THROW(DensityMatrix(diag({1.0 + 5e-11, -5e-11})));
}

TEST(PureStateTest, RejectsUnnormalized) {
  ComplexVector v = ComplexVector::Zero(2);
  v(0) = 1.0 + 1e-9;
  EXPECT_THROW(PureState{v}, InvalidInput);
}

TEST(MaxEntangled, DimensionOne) {
  const PureState s = max_entangled_state(1);
  ASSERT_EQ(s.dim(), 1);
  EXPECT_EQ(s.amplitudes()(0), std::complex<double>(1.0));
}

TEST(MaxEntangled, BellAmplitudes) {
  const PureState s = max_entangled_state(2);
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector expected(4);
  expected << r, 0, 0, r;
  EXPECT_LT((s.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MaxEntangled, QutritMarginalEntropy) {
  const DensityMatrix phi = max_entangled_state(3).projector();
  EXPECT_NEAR(von_neumann_entropy(partial_trace(phi, {3, 3}, {0})), std::log2(3.0), 1e-12);
  EXPECT_NEAR(von_neumann_entropy(partial_trace(phi, {3, 3}, {1})), std::log2(3.0), 1e-12);
}

TEST(MaxEntangled, ZeroRejected) { EXPECT_THROW(max_entangled_state(0), InvalidInput); }

TEST(Haar, OneByOneIsPhase) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    EXPECT_NEAR(std::abs(haar_unitary(1, rng).matrix()(0, 0)), 1.0, 1e-12);
  }
}

TEST(Haar, Unitary) {
  Rng rng(42);
  for (Index n : {1, 2, 3, 5, 8, 16, 64}) {
    const ComplexMatrix u = haar_unitary(n, rng).matrix();
    EXPECT_LT(max_diff(u.adjoint() * u, ComplexMatrix::Identity(n, n)), 1e-10);
  }
}

TEST(Haar, DeterministicGivenSeed) {
  Rng a(7);
  Rng b(7);
  EXPECT_EQ(haar_unitary(5, a).matrix(), haar_unitary(5, b).matrix());
}

/// Mean of f over `samples` draws lies within 3 standard errors of `expected`.
template <typename F>
void expect_moment(F&& f, int samples, double expected) {
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = f();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / samples;
  const double var = (sum2 - samples * mean * mean) / (samples - 1);
  const double se = std::sqrt(var / samples);
  EXPECT_LT(std::abs(mean - expected), 3.0 * se) << "mean " << mean << " se " << se;
}

TEST(Haar, SecondMomentOfEntry) {
  Rng rng(43);
  expect_moment([&] { return std::norm(haar_unitary(2, rng).matrix()(0, 0)); }, 10000, 0.5);
}

TEST(RandomBasis, OrthonormalColumns) {
  Rng rng(51);
  const UnitaryMatrix b = random_basis(6, rng);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) {
      const std::complex<double> ip = b.column(i).dot(b.column(j));
      EXPECT_NEAR(std::abs(ip - (i == j ? 1.0 : 0.0)), 0.0, 1e-10);
    }
  }
}

TEST(RandomBasis, DeterministicGivenSeed) {
  Rng a(99);
  Rng b(99);
  EXPECT_EQ(random_basis(4, a).matrix(), random_basis(4, b).matrix());
}

TEST(RandomBasis, OverlapMoment) {
  Rng rng(52);
  expect_moment([&] { return std::norm(random_basis(4, rng).matrix()(0, 0)); }, 10000, 0.25);
}

TEST(DeriveSeed, DistinctStreams) {
  EXPECT_NE(derive_seed(7, 0), derive_seed(7, 1));
  EXPECT_NE(derive_seed(7, 0), derive_seed(8, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

}  // namespace
}  // namespace caplab
