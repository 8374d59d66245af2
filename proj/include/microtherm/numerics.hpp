// Copyright 2026 The microtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace microtherm {

using Index = Eigen::Index;
using Real = double;
using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Errc {
  NotHermitian,
  NotSquare,
  InvalidArgument,
  InvalidState,
  ModelMismatch,
  UnsupportedComposition,
  Unsupported,
  NotPure,
  NotComposite,
  NotMicrocanonical,
  LengthMismatch,
  NotMajorised,
  NotDoublyStochastic,
  InvalidAlpha,
  DimensionMismatch,
  NotUnital,
  UnsupportedModel,
  IrrationalWeights,
  NonUniqueSpectrum,
  NotNormalized,
  PathDisagreement,
  ParseError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

struct Tolerance {
  Real eq_tol = 1e-9;
  Real psd_tol = 1e-10;
  Real stat_tol = 2e-2;
};

/// Eigenpairs of a Hermitian matrix, eigenvalues descending.
template <typename Scalar>
struct HermitianEigen {
  Eigen::Matrix<typename Eigen::NumTraits<Scalar>::Real, Eigen::Dynamic, 1> eigenvalues;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Descending eigendecomposition; equal eigenvalues keep the solver's column order
/// (i.e. ties are broken by original index).
template <typename Derived>
HermitianEigen<typename Derived::Scalar> hermitian_eigendecomposition(const Eigen::MatrixBase<Derived>& m,
                                                                      const Tolerance& tol = {}) {
  using Scalar = typename Derived::Scalar;
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols()) throw Error(Errc::NotSquare, "eigendecomposition needs a square matrix");
  if (hermiticity_defect(m) > tol.eq_tol) throw Error(Errc::NotHermitian, "matrix is not Hermitian");

  const MatrixType herm = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<MatrixType> solver(herm);
  const Index n = herm.rows();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return ev(a) > ev(b); });

  HermitianEigen<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = ev(order[static_cast<size_t>(k)]);
    out.eigenvectors.col(k) = solver.eigenvectors().col(order[static_cast<size_t>(k)]);
  }
  return out;
}

template <typename Derived>
bool is_doubly_stochastic(const Eigen::MatrixBase<Derived>& m, const Tolerance& tol = {}) {
  if (m.rows() != m.cols()) throw Error(Errc::NotSquare, "doubly stochastic test needs a square matrix");
  if (m.size() == 0) return false;
  if (m.minCoeff() < -tol.eq_tol) return false;
  const auto ones_r = (m.rowwise().sum().array() - 1).abs().maxCoeff();
  const auto ones_c = (m.colwise().sum().array() - 1).abs().maxCoeff();
  return ones_r <= tol.eq_tol && ones_c <= tol.eq_tol;
}

template <typename DerivedA, typename DerivedB>
auto max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using R = typename DerivedA::RealScalar;
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(Errc::DimensionMismatch, "shape mismatch");
  if (a.size() == 0) return R{0};
  return (a - b).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, typename Derived::RealScalar tol) {
  if (u.rows() != u.cols()) return false;
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return max_abs_diff(u.adjoint() * u, M::Identity(u.rows(), u.cols())) <= tol;
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<DerivedA>& a,
                                                                             const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                               a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Partial trace of a (da*db)-square operator, index = i*db + j.
ComplexMatrix partial_trace_second(const ComplexMatrix& m, Index da, Index db);
ComplexMatrix partial_trace_first(const ComplexMatrix& m, Index da, Index db);

/// Sum of singular values of a Hermitian difference, halved.
Real trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Haar-distributed unitary from a seeded complex Gaussian matrix (QR with phase-fixed R diagonal).
ComplexMatrix haar_random_unitary(Index d, std::uint64_t seed);

/// Per-index child seed; the same (seed, index) always yields the same stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform point on the probability simplex.
RealVector random_probability_vector(Index d, std::mt19937_64& rng);

/// Random density matrix with Haar eigenbasis and simplex-uniform spectrum.
ComplexMatrix random_density_matrix(Index d, std::mt19937_64& rng);

}  // namespace microtherm
