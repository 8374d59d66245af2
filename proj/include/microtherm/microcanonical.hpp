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

#include "microtherm/models.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace microtherm {

/// Finitely supported probability measure on half-disk pure states, atoms as (theta, weight).
struct FiniteMeasure {
  std::vector<std::pair<Real, Real>> atoms;
};

struct InvariantDistributionReport {
  bool unique = false;
  /// Number of orbits of the reversible group on pure states; nullopt means infinitely many.
  std::optional<Index> orbit_count;
  std::vector<FiniteMeasure> witness_distributions;
};

/// The uniform mixture of a pure maximal set. Throws NotMicrocanonical for the half-disk.
State microcanonical_state(const TheoryModel& model);

struct ExactTwirl {};
struct MonteCarloTwirl {
  int samples = 10000;
  std::uint64_t seed = 0;
};
using TwirlMode = std::variant<ExactTwirl, MonteCarloTwirl>;

/// Group average of the reversible orbit of s. Exact mode is analytic for Quantum and
/// DoubledQuantum (up to dimension 8) and enumerative for finite groups; Monte-Carlo mode
/// averages samples drawn with per-sample derived seeds.
State twirl(const State& s, const TwirlMode& mode);

/// max-norm distance between chi_A ⊗ chi_B and chi_AB.
Real informational_equilibrium_defect(const TheoryModel& a, const TheoryModel& b);
bool check_informational_equilibrium(const TheoryModel& a, const TheoryModel& b, Real tol);

/// Invariance of a half-disk measure under the reflection theta -> pi - theta.
bool is_reflection_invariant(const FiniteMeasure& measure, Real tol = 1e-12);

InvariantDistributionReport invariant_distribution_report(const TheoryModel& model);

/// Exhaustive over finite groups, otherwise `samples` seeded reversibles.
bool check_minimally_resourceful(const State& s, const Tolerance& tol = {}, int samples = 100,
                                 std::uint64_t seed = 0);

}  // namespace microtherm
