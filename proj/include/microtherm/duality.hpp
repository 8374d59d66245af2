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

#include "microtherm/channels.hpp"
#include "microtherm/majorisation.hpp"
#include "microtherm/models.hpp"

#include <cstdint>
#include <utility>

namespace microtherm {

/// Psi = sum_ij M_ij |i>|j> on C^dA ⊗ C^dB.
class PureBipartiteState {
 public:
  explicit PureBipartiteState(ComplexMatrix amplitudes, const Tolerance& tol = {});

  Index dim_a() const { return amplitudes_.rows(); }
  Index dim_b() const { return amplitudes_.cols(); }
  const ComplexMatrix& amplitudes() const { return amplitudes_; }

  /// Ket in the product ordering i * dB + j.
  ComplexVector ket() const;
  /// |Psi><Psi| as a state of Quantum(dA) ⊗ Quantum(dB).
  State state() const;

  static PureBipartiteState product(const ComplexVector& a, const ComplexVector& b);
  /// (1/sqrt d) sum_i |i>|i>.
  static PureBipartiteState maximally_entangled(Index d);
  static PureBipartiteState random(Index da, Index db, std::uint64_t seed);

 private:
  ComplexMatrix amplitudes_;
};

/// Squared Schmidt coefficients, descending, length min(dA, dB).
Spectrum schmidt(const PureBipartiteState& psi, const Tolerance& tol = {});

struct DualityClauses {
  bool schmidt_majorisation = false;
  bool marginal_a_rare = false;
  bool marginal_b_rare = false;

  bool agree() const { return schmidt_majorisation == marginal_a_rare && marginal_a_rare == marginal_b_rare; }
};

/// Schmidt(psi) ⪰ Schmidt(phi), together with the RaRe verdicts psi_A -> phi_A and psi_B -> phi_B
/// computed from the marginals. Marginals of different dimension are zero-padded.
DualityClauses duality_clauses(const PureBipartiteState& phi, const PureBipartiteState& psi, const Tolerance& tol = {});

/// phi -> psi by LOCC. Throws PathDisagreement if the Schmidt and marginal computations differ.
bool locc_convertible(const PureBipartiteState& phi, const PureBipartiteState& psi, const Tolerance& tol = {});

/// sum_i sqrt(p_i) |a_i>|a_i> over an eigenbasis of rho; both marginals equal rho.
PureBipartiteState symmetric_purification(const State& rho, const Tolerance& tol = {});

/// Shannon entropy (natural log) of the Schmidt spectrum.
Real entanglement_entropy(const PureBipartiteState& psi, const Tolerance& tol = {});

struct ExchangeWitness {
  Channel c;  // A -> B
  Channel d;  // B -> A
  ComplexMatrix c_unitary;
  ComplexMatrix d_unitary;
  /// Phase-aligned max-norm distance between (C ⊗ D) Psi and SWAP Psi.
  Real residual = 0;
};

/// Unitaries |a_i> -> |b_i> and |b_i> -> |a_i> built from the Schmidt bases (dA = dB).
ExchangeWitness local_exchangeability_witness(const PureBipartiteState& psi);

/// Max-norm distance between two kets after removing the relative phase at the largest amplitude of b.
Real phase_aligned_distance(const ComplexVector& a, const ComplexVector& b);

}  // namespace microtherm
