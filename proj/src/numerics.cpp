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

#include "microtherm/numerics.hpp"

#include <cmath>

namespace microtherm {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotSquare: return "NotSquare";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidState: return "InvalidState";
    case Errc::ModelMismatch: return "ModelMismatch";
    case Errc::UnsupportedComposition: return "UnsupportedComposition";
    case Errc::Unsupported: return "Unsupported";
    case Errc::NotPure: return "NotPure";
    case Errc::NotComposite: return "NotComposite";
    case Errc::NotMicrocanonical: return "NotMicrocanonical";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotMajorised: return "NotMajorised";
    case Errc::NotDoublyStochastic: return "NotDoublyStochastic";
    case Errc::InvalidAlpha: return "InvalidAlpha";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotUnital: return "NotUnital";
    case Errc::UnsupportedModel: return "UnsupportedModel";
    case Errc::IrrationalWeights: return "IrrationalWeights";
    case Errc::NonUniqueSpectrum: return "NonUniqueSpectrum";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::PathDisagreement: return "PathDisagreement";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

ComplexMatrix partial_trace_second(const ComplexMatrix& m, Index da, Index db) {
  if (m.rows() != da * db || m.cols() != da * db) throw Error(Errc::DimensionMismatch, "partial trace shape");
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (Index i = 0; i < da; ++i)
    for (Index k = 0; k < da; ++k)
      for (Index j = 0; j < db; ++j) out(i, k) += m(i * db + j, k * db + j);
  return out;
}

ComplexMatrix partial_trace_first(const ComplexMatrix& m, Index da, Index db) {
  if (m.rows() != da * db || m.cols() != da * db) throw Error(Errc::DimensionMismatch, "partial trace shape");
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Index j = 0; j < db; ++j)
    for (Index l = 0; l < db; ++l)
      for (Index i = 0; i < da; ++i) out(j, l) += m(i * db + j, i * db + l);
  return out;
}

Real trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((diff + diff.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum() / 2;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix haar_random_unitary(Index d, std::uint64_t seed) {
  if (d < 1) throw Error(Errc::InvalidArgument, "unitary dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);
  ComplexMatrix z(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < d; ++k) {
    const Real mag = std::abs(r(k, k));
    const Complex phase = mag > 0 ? r(k, k) / mag : Complex(1.0, 0.0);
    q.col(k) *= phase;
  }
  return q;
}

RealVector random_probability_vector(Index d, std::mt19937_64& rng) {
  std::exponential_distribution<Real> expo(1.0);
  RealVector p(d);
  for (Index i = 0; i < d; ++i) p(i) = expo(rng);
  return p / p.sum();
}

ComplexMatrix random_density_matrix(Index d, std::mt19937_64& rng) {
  const RealVector p = random_probability_vector(d, rng);
  const ComplexMatrix u = haar_random_unitary(d, rng());
  return u * p.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace microtherm
