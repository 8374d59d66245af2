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

#include "microtherm/duality.hpp"

#include "microtherm/convertibility.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace microtherm {

PureBipartiteState::PureBipartiteState(ComplexMatrix amplitudes, const Tolerance& tol)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error(Errc::InvalidArgument, "empty amplitude matrix");
  if (std::abs(amplitudes_.norm() - 1) > tol.eq_tol)
    throw Error(Errc::NotNormalized, "amplitudes have Frobenius norm " + std::to_string(amplitudes_.norm()));
}

ComplexVector PureBipartiteState::ket() const {
  ComplexVector v(amplitudes_.size());
  for (Index i = 0; i < dim_a(); ++i)
    for (Index j = 0; j < dim_b(); ++j) v(i * dim_b() + j) = amplitudes_(i, j);
  return v;
}

State PureBipartiteState::state() const {
  const ComplexVector v = ket();
  const TheoryModel model = compose_systems(TheoryModel::quantum(dim_a()), TheoryModel::quantum(dim_b()));
  return State::unchecked(model, ComplexMatrix(v * v.adjoint()));
}

PureBipartiteState PureBipartiteState::product(const ComplexVector& a, const ComplexVector& b) {
  return PureBipartiteState(a.normalized() * b.normalized().transpose());
}

PureBipartiteState PureBipartiteState::maximally_entangled(Index d) {
  return PureBipartiteState(ComplexMatrix(ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<Real>(d))));
}

PureBipartiteState PureBipartiteState::random(Index da, Index db, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal;
  ComplexMatrix m(da, db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < db; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return PureBipartiteState(ComplexMatrix(m / m.norm()));
}

Spectrum schmidt(const PureBipartiteState& psi, const Tolerance& tol) {
  Eigen::JacobiSVD<ComplexMatrix> svd(psi.amplitudes());
  return Spectrum::from_weights(svd.singularValues().cwiseAbs2(), tol);
}

DualityClauses duality_clauses(const PureBipartiteState& phi, const PureBipartiteState& psi, const Tolerance& tol) {
  if (phi.dim_a() != psi.dim_a() || phi.dim_b() != psi.dim_b())
    throw Error(Errc::DimensionMismatch, "bipartite states must share local dimensions");
  DualityClauses out;
  out.schmidt_majorisation = majorises(schmidt(psi, tol), schmidt(phi, tol), tol);
  const State phi_state = phi.state(), psi_state = psi.state();
  out.marginal_a_rare =
      rare_convertible(marginal(psi_state, Factor::A), marginal(phi_state, Factor::A), tol).answer == Answer::Yes;
  out.marginal_b_rare =
      rare_convertible(marginal(psi_state, Factor::B), marginal(phi_state, Factor::B), tol).answer == Answer::Yes;
  return out;
}

bool locc_convertible(const PureBipartiteState& phi, const PureBipartiteState& psi, const Tolerance& tol) {
  const DualityClauses c = duality_clauses(phi, psi, tol);
  if (!c.agree())
    throw Error(Errc::PathDisagreement, "Schmidt and marginal paths disagree on LOCC convertibility");
  return c.schmidt_majorisation;
}

PureBipartiteState symmetric_purification(const State& rho, const Tolerance& tol) {
  if (rho.model().kind() != ModelKind::Quantum)
    throw Error(Errc::UnsupportedModel, "symmetric purification is built for quantum states");
  const auto eig = hermitian_eigendecomposition(rho.density(), tol);
  const RealVector root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix& a = eig.eigenvectors;
  ComplexMatrix m = a * root.cast<Complex>().asDiagonal() * a.transpose();
  return PureBipartiteState(ComplexMatrix(m / m.norm()), tol);
}

Real entanglement_entropy(const PureBipartiteState& psi, const Tolerance& tol) {
  return -shannon_monotone(schmidt(psi, tol));
}

Real phase_aligned_distance(const ComplexVector& a, const ComplexVector& b) {
  Index k = 0;
  b.cwiseAbs().maxCoeff(&k);
  Complex phase(1, 0);
  if (std::abs(a(k)) > 0) phase = (b(k) / a(k)) / std::abs(b(k) / a(k));
  return (a * phase - b).cwiseAbs().maxCoeff();
}

ExchangeWitness local_exchangeability_witness(const PureBipartiteState& psi) {
  if (psi.dim_a() != psi.dim_b())
    throw Error(Errc::DimensionMismatch, "the witness constructor needs equal local dimensions");
  const Index d = psi.dim_a();
  // M = U S V^dagger gives Psi = sum_i s_i |u_i> |conj v_i>; the full SVD completes both bases.
  Eigen::JacobiSVD<ComplexMatrix> svd(psi.amplitudes(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix a = svd.matrixU();
  const ComplexMatrix b = svd.matrixV().conjugate();
  ComplexMatrix cu = b * a.adjoint();
  ComplexMatrix du = a * b.adjoint();
  const TheoryModel model = TheoryModel::quantum(d);
  ExchangeWitness w{Channel::reversible(Reversible(model, cu)), Channel::reversible(Reversible(model, du)), cu, du, 0};
  const ComplexVector moved = kron(cu, du) * psi.ket();
  const ComplexVector swapped = PureBipartiteState(psi.amplitudes().transpose()).ket();
  w.residual = phase_aligned_distance(moved, swapped);
  return w;
}

}  // namespace microtherm
