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

#include "microtherm/majorisation.hpp"
#include "microtherm/models.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace microtherm {

struct ReversibleTerm {
  Real weight = 0;
  Reversible reversible;
};

/// Random-reversible (RaRe) channel: sum_k w_k U_k.
struct MixtureOfReversibles {
  std::vector<ReversibleTerm> terms;
};

/// s -> sum_j pair(effects[j], s) * states[j].
struct MeasureAndPrepare {
  std::vector<Effect> effects;
  std::vector<State> states;
};

/// rho -> sum_k K rho K^dagger. For DoubledQuantum the operators act on the full 2d space
/// and must keep block-diagonal operators block diagonal.
struct OperatorSum {
  std::vector<ComplexMatrix> kraus;
};

/// Measure in basis_in, prepare sum_i D_ij basis_out[i] on outcome j.
struct DoublyStochasticInduced {
  DoublyStochasticMatrix matrix;
  PureMaximalSet basis_in;
  PureMaximalSet basis_out;
};

using ChannelRepresentation = std::variant<MixtureOfReversibles, MeasureAndPrepare, OperatorSum, DoublyStochasticInduced>;

class Channel {
 public:
  Channel(TheoryModel input, TheoryModel output, ChannelRepresentation representation, const Tolerance& tol = {});

  static Channel identity(const TheoryModel& model);
  static Channel reversible(const Reversible& u);

  const TheoryModel& input() const { return input_; }
  const TheoryModel& output() const { return output_; }
  const ChannelRepresentation& representation() const { return representation_; }

 private:
  TheoryModel input_;
  TheoryModel output_;
  ChannelRepresentation representation_;
};

State apply_channel(const Channel& c, const State& s);

/// max-norm distance between C(chi_in) and chi_out.
Real unitality_defect(const Channel& c);
bool is_unital(const Channel& c, Real tol);

/// Measure-and-prepare unital channel sum_j rho_j alpha_j^dagger with rho_j = sum_i D_ij alpha'_i.
Channel unital_from_doubly_stochastic(const TheoryModel& model, const DoublyStochasticMatrix& d,
                                      const PureMaximalSet& basis_in, const PureMaximalSet& basis_out);

struct ExtractedMatrix {
  RealMatrix matrix;
  bool doubly_stochastic = false;
};

/// M_ij = pair(dagger(basis_out[i]), C(basis_in[j])); doubly stochastic when C is unital.
ExtractedMatrix doubly_stochastic_from_channel(const Channel& c, const PureMaximalSet& basis_in,
                                               const PureMaximalSet& basis_out, const Tolerance& tol = {});

/// Reversible sending basis_in[j] to basis_out[image[j]]. Throws UnsupportedModel when the
/// theory has no such reversible (square bit, sector-inconsistent doubled-quantum maps).
Reversible basis_permutation_reversible(const TheoryModel& model, const PureMaximalSet& basis_in,
                                        const PureMaximalSet& basis_out, const PermutationImage& image);

/// Birkhoff terms of D turned into a mixture of basis-permuting reversibles.
Channel rare_from_birkhoff(const TheoryModel& model, const PureMaximalSet& basis_in, const PureMaximalSet& basis_out,
                           const DoublyStochasticMatrix& d, const Tolerance& tol = {});

struct RationalWeights {
  std::vector<Index> numerators;
  Index denominator = 1;
  Real max_error = 0;
};

/// Common-denominator rational approximation (continued fractions, denominator <= max_denominator).
RationalWeights rationalize_weights(std::span<const Real> weights, Index max_denominator = 10000);

/// Same channel with rationalized weights, plus the largest weight change.
std::pair<Channel, Real> rationalize_channel(const Channel& rare, Index max_denominator = 10000);

/// Control levels that share one unitary.
struct ControlGroup {
  Index multiplicity = 1;
  ComplexMatrix unitary;
};

/// Basic noisy operation: system ⊗ ancilla(χ), controlled unitary sum_k V_k ⊗ |k><k|,
/// discard ancilla. Dense ancilla objects are built on request only, since n reaches 10^4.
struct NoisyRealization {
  TheoryModel system;
  TheoryModel ancilla_model;
  /// Consecutive control levels grouped by unitary; multiplicities sum to the ancilla dimension.
  std::vector<ControlGroup> controls;
  /// Ancilla preparation if it is not χ (hand-built realizations only).
  std::optional<State> prepared_ancilla;

  State ancilla_state() const;
  Effect discarded_effect() const;
  /// V_k for control level k.
  const ComplexMatrix& controlled_unitary(Index k) const;
  /// The global unitary on system ⊗ ancilla (index i * n + k).
  Reversible global_reversible() const;
};

/// Control-unitary realization of a rational quantum RaRe channel with weights n_i / n.
NoisyRealization noisy_realization(const Channel& rare, const Tolerance& tol = {});

/// Induced channel Tr_anc[U (s ⊗ ancilla_state) U^dagger].
State apply_noisy_realization(const NoisyRealization& n, const State& s);

bool is_basic_noisy(const NoisyRealization& n, const Tolerance& tol = {});

/// The induced channel maps chi to chi within tol.eq_tol.
bool noisy_is_unital_check(const NoisyRealization& n, const Tolerance& tol = {});

/// Spin-j operators (J_x, J_y, J_z) in the |j,m> basis, m descending.
std::array<ComplexMatrix, 3> spin_operators(Real j);

/// D_j(rho) = (J_x rho J_x + J_y rho J_y + J_z rho J_z) / (j (j + 1)).
Channel landau_streater(Real j);

/// All basis states of a fixed maximal set, chi, and 20 seeded random states.
std::vector<State> spanning_states(const TheoryModel& model, std::uint64_t seed = 0);

/// max over a spanning set of distance_max(f(s), g(s)).
template <typename F, typename G>
Real spanning_set_distance(const TheoryModel& model, F&& f, G&& g, std::uint64_t seed = 0) {
  Real worst = 0;
  for (const auto& s : spanning_states(model, seed)) worst = std::max(worst, distance_max(f(s), g(s)));
  return worst;
}

/// max over a spanning set of |pair(u, C(s)) - 1|.
Real trace_preservation_defect(const Channel& c, std::uint64_t seed = 0);

}  // namespace microtherm
