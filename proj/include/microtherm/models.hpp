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
#include "microtherm/numerics.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace microtherm {

enum class ModelKind { Classical, Quantum, DoubledQuantum, SquareBit, HalfDisk };

enum class Factor { A, B };

const char* model_kind_name(ModelKind kind);

/// A concrete finite theory. For DoubledQuantum, d() is the dimension of one sector.
/// Composites remember their two factors so that marginals can be taken.
class TheoryModel {
 public:
  static TheoryModel classical(Index d);
  static TheoryModel quantum(Index d);
  static TheoryModel doubled_quantum(Index sector_dim);
  static TheoryModel square_bit();
  static TheoryModel half_disk();

  ModelKind kind() const { return kind_; }
  Index d() const { return d_; }
  bool is_composite() const { return factor_a_ != nullptr; }
  const TheoryModel& factor(Factor which) const;
  std::string name() const;

  /// Equality is on the single-system structure (kind and dimension); factor
  /// bookkeeping is ignored.
  friend bool operator==(const TheoryModel& a, const TheoryModel& b) { return a.kind_ == b.kind_ && a.d_ == b.d_; }

 private:
  TheoryModel(ModelKind kind, Index d) : kind_(kind), d_(d) {}
  friend TheoryModel compose_systems(const TheoryModel&, const TheoryModel&);

  ModelKind kind_;
  Index d_;
  std::shared_ptr<const TheoryModel> factor_a_;
  std::shared_ptr<const TheoryModel> factor_b_;
};

/// Cardinality of a pure maximal set: d, 2d for DoubledQuantum, 2 for the square bit and half-disk.
Index dimension(const TheoryModel& model);

TheoryModel compose_systems(const TheoryModel& a, const TheoryModel& b);

/// Two diagonal blocks of a DoubledQuantum operator, one per superselection sector.
struct SectorBlocks {
  ComplexMatrix block0;
  ComplexMatrix block1;
};

/// Classical: probabilities; Quantum: density matrix; DoubledQuantum: blocks;
/// SquareBit/HalfDisk: the planar point (x, y) of the vector (x, y, 1).
using StatePayload = std::variant<RealVector, ComplexMatrix, SectorBlocks, Eigen::Vector2d>;

/// Classical: row vector; Quantum: operator 0 <= E <= I; DoubledQuantum: blocks;
/// SquareBit/HalfDisk: affine functional (a, b, c) acting as a*x + b*y + c.
using EffectPayload = std::variant<RealVector, ComplexMatrix, SectorBlocks, Eigen::Vector3d>;

class State {
 public:
  /// Validated construction: payload kind must match the model, normalized, positive.
  State(TheoryModel model, StatePayload payload, const Tolerance& tol = {});

  static State classical(RealVector probabilities);
  static State quantum(ComplexMatrix density);
  static State doubled_quantum(ComplexMatrix block0, ComplexMatrix block1);
  static State square_bit(Real x, Real y);
  static State half_disk(Real x, Real y);

  /// No validation; used for intermediate values produced by exact operations.
  static State unchecked(TheoryModel model, StatePayload payload);

  const TheoryModel& model() const { return model_; }
  const StatePayload& payload() const { return payload_; }

  const RealVector& probabilities() const;
  const ComplexMatrix& density() const;
  const SectorBlocks& blocks() const;
  const Eigen::Vector2d& point() const;

 private:
  State(TheoryModel model, StatePayload payload, std::nullptr_t) : model_(std::move(model)), payload_(std::move(payload)) {}

  TheoryModel model_;
  StatePayload payload_;
};

class Effect {
 public:
  Effect(TheoryModel model, EffectPayload payload);

  const TheoryModel& model() const { return model_; }
  const EffectPayload& payload() const { return payload_; }

 private:
  TheoryModel model_;
  EffectPayload payload_;
};

/// Sector-preserving unitary U0 ⊕ U1, optionally preceded by the sector exchange E
/// (|0,x> <-> |1,x>): the full operator is (U0 ⊕ U1) E^exchange.
struct DoubledUnitary {
  ComplexMatrix u0;
  ComplexMatrix u1;
  bool exchange = false;
};

/// Classical: image form of a permutation (e_j -> e_image[j]).
struct Permutation {
  std::vector<Index> image;
};

/// Index into the finite symmetry group (8 dihedral elements, or {identity, reflection}).
struct GroupElement {
  int index = 0;
};

using ReversiblePayload = std::variant<Permutation, ComplexMatrix, DoubledUnitary, GroupElement>;

class Reversible {
 public:
  Reversible(TheoryModel model, ReversiblePayload payload, const Tolerance& tol = {});

  static Reversible permutation(std::vector<Index> image);
  static Reversible unitary(ComplexMatrix u);
  static Reversible doubled(ComplexMatrix u0, ComplexMatrix u1, bool exchange = false);
  static Reversible square_bit(int element);
  static Reversible half_disk(int element);

  const TheoryModel& model() const { return model_; }
  const ReversiblePayload& payload() const { return payload_; }

 private:
  TheoryModel model_;
  ReversiblePayload payload_;
};

struct PureMaximalSet {
  std::vector<State> states;
  std::vector<Effect> dagger_effects;

  Index size() const { return static_cast<Index>(states.size()); }
};

/// The eight symmetries of the square as integer matrices acting on (x, y):
/// 0..3 rotations by k*pi/2, 4: (x,-y), 5: (-x,y), 6: (y,x), 7: (-y,-x).
const std::array<Eigen::Matrix2i, 8>& dihedral_elements();

/// Square-bit vertices alpha_1 = (-1, 1), alpha_2 = (-1, -1), alpha_3 = (1, -1), alpha_4 = (1, 1).
const std::array<Eigen::Vector2d, 4>& square_bit_vertices();

Real pair(const Effect& effect, const State& state, const Tolerance& tol = {});
Effect deterministic_effect(const TheoryModel& model);

State tensor_states(const State& s, const State& t);
Effect tensor_effects(const Effect& a, const Effect& b);

State apply_reversible(const Reversible& u, const State& s);
Reversible inverse(const Reversible& u);

/// Seeded pure maximal set. Quantum: Haar basis; DoubledQuantum: Haar bases inside
/// each sector (sector 0 first); Classical: point masses; SquareBit: one of the six
/// vertex pairs chosen by the seed.
PureMaximalSet pure_maximal_set(const TheoryModel& model, std::uint64_t choice_seed);

/// Computational-basis maximal set (point masses, |i><i|, |s,i><s,i|, or {alpha_1, alpha_2}).
PureMaximalSet standard_maximal_set(const TheoryModel& model);

Effect dagger(const State& pure, const Tolerance& tol = {});
bool is_pure(const State& s, const Tolerance& tol = {});

struct Diagonalisation {
  Spectrum spectrum;
  std::vector<State> eigenstates;
  bool non_unique = false;
};

/// Descending spectrum with the full list of eigenstates (zero weights included for
/// Classical/Quantum/DoubledQuantum). SquareBit/HalfDisk return a flagged canonical
/// decomposition into pure states.
Diagonalisation diagonalise(const State& s, const Tolerance& tol = {});

State marginal(const State& s, Factor keep);

/// Convex combination; weights are used as given.
State mixture(std::span<const Real> weights, std::span<const State> states);

/// Largest absolute payload difference between two states of the same model.
Real distance_max(const State& a, const State& b);

/// Raw value of the deterministic effect on s (1 for normalized states), without clamping.
Real total_weight(const State& s);

/// Unit vector of a pure Quantum state (phase fixed so the largest entry is real positive).
ComplexVector pure_ket(const State& pure, const Tolerance& tol = {});

/// Sector and in-sector unit vector of a pure DoubledQuantum state.
std::pair<int, ComplexVector> pure_sector_ket(const State& pure, const Tolerance& tol = {});

/// Full (2d x 2d) block-diagonal matrix of a sector pair.
ComplexMatrix direct_sum(const SectorBlocks& blocks);

/// Full-space indices (in the factor-product ordering (s_A d_A + i) * 2 d_B + (s_B d_B + j))
/// of the basis of sector `sector` of a doubled composite, in the order
/// sector 0: {|0,i>|0,j>} then {|1,i>|1,j>}; sector 1: {|0,i>|1,j>} then {|1,i>|0,j>}.
std::vector<Index> doubled_composite_sector_indices(Index da, Index db, int sector);

Reversible random_reversible(const TheoryModel& model, std::uint64_t seed);

/// Every element of a finite reversible group (Classical up to d = 7, SquareBit, HalfDisk).
std::vector<Reversible> all_reversibles(const TheoryModel& model);

State random_state(const TheoryModel& model, std::uint64_t seed);
State random_pure_state(const TheoryModel& model, std::uint64_t seed);

}  // namespace microtherm
