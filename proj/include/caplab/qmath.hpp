#pragma once

// Dense complex linear algebra and quantum-state primitives.
//
// Low-level routines (tensor, partial_trace, entropy_bits) are free function
// templates over Eigen expressions and perform no state validation. The
// strong types (BasicDensityMatrix, BasicPureState, BasicUnitary) validate
// their invariants on construction.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace caplab {

using Index = Eigen::Index;

/// Raised for every precondition or invariant violation on caller input.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;

namespace tolerance {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kPositive = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kPureNorm = 1e-12;
/// Eigenvalues below this are treated as exactly zero in entropies.
inline constexpr double kEigenClip = 1e-12;
}  // namespace tolerance

/// Ordered subsystem dimensions annotating a composite matrix.
class DimVector {
 public:
  DimVector() = default;
  DimVector(std::initializer_list<Index> dims) : DimVector(std::vector<Index>(dims)) {}
  explicit DimVector(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidInput("DimVector: no subsystems");
    for (Index d : dims_) {
      if (d < 1) throw InvalidInput("DimVector: subsystem dimension must be >= 1");
    }
  }

  std::size_t size() const { return dims_.size(); }
  Index operator[](std::size_t i) const { return dims_.at(i); }
  const std::vector<Index>& values() const { return dims_; }
  Index total() const {
    return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
  }
  bool operator==(const DimVector&) const = default;

 private:
  std::vector<Index> dims_;
};

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

/// (M + M^dagger) / 2.
template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(
      (m + m.adjoint()) * typename Derived::RealScalar(0.5));
}

/// Kronecker product; entry (i*rb + k, j*cb + l) = a(i,j) * b(k,l).
template <typename A, typename B>
auto tensor(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::kroneckerProduct(a.derived().eval(), b.derived().eval());
  return out;
}

/// Partial trace of a square matrix over every subsystem not listed in
/// `keep`. Subsystem 0 is the most significant tensor factor. The kept
/// subsystems appear in their original relative order.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const DimVector& dims,
                   std::vector<std::size_t> keep) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (m.rows() != m.cols()) throw InvalidInput("partial_trace: matrix is not square");
  if (dims.total() != m.rows()) {
    throw InvalidInput("partial_trace: dims product " + std::to_string(dims.total()) +
                       " does not match matrix dimension " + std::to_string(m.rows()));
  }
  if (keep.empty()) throw InvalidInput("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw InvalidInput("partial_trace: duplicate subsystem index in keep set");
  }
  if (keep.back() >= dims.size()) throw InvalidInput("partial_trace: subsystem index out of range");

  const std::size_t n = dims.size();
  std::vector<Index> stride(n);
  Index s = 1;
  for (std::size_t k = n; k-- > 0;) {
    stride[k] = s;
    s *= dims[k];
  }

  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) kept[k] = true;

  // Offsets into the full index for every multi-index of a subsystem group.
  auto offsets = [&](bool want_kept) {
    std::vector<Index> out{0};
    for (std::size_t k = 0; k < n; ++k) {
      if (kept[k] != want_kept) continue;
      std::vector<Index> next;
      next.reserve(out.size() * static_cast<std::size_t>(dims[k]));
      for (Index base : out) {
        for (Index digit = 0; digit < dims[k]; ++digit) next.push_back(base + digit * stride[k]);
      }
      out = std::move(next);
    }
    return out;
  };
  const std::vector<Index> kept_off = offsets(true);
  const std::vector<Index> traced_off = offsets(false);

  const auto& src = m.derived();
  const Index dk = static_cast<Index>(kept_off.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (Index c = 0; c < dk; ++c) {
    for (Index r = 0; r < dk; ++r) {
      Scalar acc(0);
      for (Index t : traced_off) acc += src(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

/// -sum lambda log2 lambda over the eigenvalues of the Hermitian part of `m`,
/// with eigenvalues below the clip threshold treated as zero. No validation.
template <typename Derived>
typename Derived::RealScalar entropy_bits(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  const Real clip = Real(tolerance::kEigenClip);
  auto term = [clip](Real lambda) {
    return lambda < clip ? Real(0) : -lambda * std::log2(lambda);
  };
  if (m.rows() == 1) return term(std::real(m(0, 0)));
  if (m.rows() == 2) {
    // Closed form for 2x2 Hermitian matrices.
    const Real a = std::real(m(0, 0));
    const Real d = std::real(m(1, 1));
    const auto b = (m(0, 1) + std::conj(m(1, 0))) * Real(0.5);
    const Real mean = (a + d) / 2;
    const Real radius = std::hypot((a - d) / 2, std::abs(b));
    return term(mean + radius) + term(mean - radius);
  }
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  Real s(0);
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) s += term(solver.eigenvalues()(i));
  return s;
}

/// Hermitian, positive semidefinite, unit-trace matrix.
template <typename Real>
class BasicDensityMatrix {
 public:
  using Matrix = ComplexMatrixT<Real>;

  /// Validates `m` as given.
  explicit BasicDensityMatrix(Matrix m) : m_(std::move(m)) { validate(); }

  /// Symmetrizes before validating; for states produced by arithmetic.
  static BasicDensityMatrix symmetrized(const Matrix& m) {
    return BasicDensityMatrix(hermitian_part(m));
  }

  /// Symmetrizes without the eigenvalue check. Only for states that are
  /// positive by construction (channel outputs, reductions, mixtures).
  static BasicDensityMatrix trusted(const Matrix& m) {
    BasicDensityMatrix out;
    out.m_ = hermitian_part(m);
    return out;
  }

  static BasicDensityMatrix maximally_mixed(Index dim) {
    if (dim < 1) throw InvalidInput("maximally_mixed: dim must be >= 1");
    return trusted(Matrix::Identity(dim, dim) / Real(dim));
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  std::complex<Real> operator()(Index r, Index c) const { return m_(r, c); }

 private:
  BasicDensityMatrix() = default;

  void validate() const {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
      throw InvalidInput("DensityMatrix: matrix must be square and nonempty");
    }
    if (max_abs(m_ - m_.adjoint()) > Real(tolerance::kHermitian)) {
      throw InvalidInput("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - std::complex<Real>(1)) > Real(tolerance::kTrace)) {
      throw InvalidInput("DensityMatrix: trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m_), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -Real(tolerance::kPositive)) {
      throw InvalidInput("DensityMatrix: matrix has a negative eigenvalue");
    }
  }

  Matrix m_;
};

/// Unit-norm state vector.
template <typename Real>
class BasicPureState {
 public:
  using Vector = ComplexVectorT<Real>;

  explicit BasicPureState(Vector amplitudes) : v_(std::move(amplitudes)) {
    if (v_.size() == 0) throw InvalidInput("PureState: empty amplitude vector");
    if (std::abs(v_.norm() - Real(1)) > Real(tolerance::kPureNorm)) {
      throw InvalidInput("PureState: amplitudes are not normalized");
    }
  }

  Index dim() const { return v_.size(); }
  const Vector& amplitudes() const { return v_; }
  BasicDensityMatrix<Real> projector() const {
    return BasicDensityMatrix<Real>::trusted(v_ * v_.adjoint());
  }

 private:
  Vector v_;
};

template <typename Real>
class BasicUnitary {
 public:
  using Matrix = ComplexMatrixT<Real>;

  explicit BasicUnitary(Matrix u) : u_(std::move(u)) {
    if (u_.rows() == 0 || u_.rows() != u_.cols()) {
      throw InvalidInput("UnitaryMatrix: matrix must be square and nonempty");
    }
    if (max_abs(u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols())) >
        Real(tolerance::kUnitary)) {
      throw InvalidInput("UnitaryMatrix: U^dagger U differs from identity");
    }
  }

  Index dim() const { return u_.rows(); }
  const Matrix& matrix() const { return u_; }
  auto column(Index j) const { return u_.col(j); }

 private:
  Matrix u_;
};

using DensityMatrix = BasicDensityMatrix<double>;
using PureState = BasicPureState<double>;
using UnitaryMatrix = BasicUnitary<double>;

template <typename Real>
Real von_neumann_entropy(const BasicDensityMatrix<Real>& rho) {
  return entropy_bits(rho.matrix());
}

template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, const DimVector& dims,
                                       std::vector<std::size_t> keep) {
  return BasicDensityMatrix<Real>::trusted(partial_trace(rho.matrix(), dims, std::move(keep)));
}

template <typename Real>
BasicDensityMatrix<Real> tensor(const BasicDensityMatrix<Real>& a, const BasicDensityMatrix<Real>& b) {
  return BasicDensityMatrix<Real>::trusted(tensor(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------
// Randomness

/// Random source for every sampling routine.
using Rng = std::mt19937_64;

/// Deterministic child seed for stream `k` of `master` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k);

/// (1/sqrt d) sum_i |i>|i> on dimension d^2.
PureState max_entangled_state(Index d);

/// Haar-distributed unitary: Ginibre matrix, QR, then the phases of diag(R).
UnitaryMatrix haar_unitary(Index n, Rng& rng);

/// Haar-random orthonormal basis; column j is basis vector j.
UnitaryMatrix random_basis(Index n, Rng& rng);

/// Unit vector drawn uniformly from the complex sphere.
ComplexVector random_unit_vector(Index n, Rng& rng);

/// Ginibre (Hilbert-Schmidt) random mixed state of full rank.
DensityMatrix random_density_matrix(Index n, Rng& rng);

}  // namespace caplab
