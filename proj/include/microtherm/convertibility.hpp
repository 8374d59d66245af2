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
#include "microtherm/models.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace microtherm {

enum class Relation { RaRe, Noisy, Unital };
enum class Answer { Yes, No, Unknown };

const char* relation_name(Relation r);
const char* answer_name(Answer a);

struct ConvertibilityVerdict {
  Relation relation = Relation::Unital;
  Answer answer = Answer::Unknown;
  /// Present whenever answer is Yes.
  std::optional<Channel> witness;
  /// distance_max(witness(rho), sigma).
  Real witness_residual = 0;
  /// Present whenever answer is No.
  std::optional<std::string> obstruction;
  /// Why an Unknown could not be settled.
  std::optional<std::string> note;
  /// Noisy verdicts on quantum systems: control-unitary realization of the rationalized witness.
  std::optional<NoisyRealization> realization;
  Real realization_error = 0;
};

/// rho -> sigma by a unital channel iff the spectrum of rho majorises that of sigma.
ConvertibilityVerdict unital_convertible(const State& rho, const State& sigma, const Tolerance& tol = {});

/// Mixtures of reversibles. Exact for Classical and Quantum; three-valued for DoubledQuantum.
ConvertibilityVerdict rare_convertible(const State& rho, const State& sigma, const Tolerance& tol = {});

/// Noisy operations. Classical and Quantum collapse onto majorisation; DoubledQuantum is
/// sandwiched between the RaRe and unital answers.
ConvertibilityVerdict noisy_convertible(const State& rho, const State& sigma, const Tolerance& tol = {});

/// (tr block0, tr block1) of a doubled-quantum state.
std::pair<Real, Real> dqt_sector_mass(const State& s);

/// rho = (|0,0><0,0| + |0,1><0,1|)/2 and sigma = |0,0><0,0|/2 ⊕ |1,0><1,0|/2 on a doubled qubit.
std::pair<State, State> dqt_counterexample_states();

struct CounterexampleReport {
  State rho;
  State sigma;
  Spectrum spectrum_rho;
  Spectrum spectrum_sigma;
  std::pair<Real, Real> mass_rho;
  std::pair<Real, Real> mass_sigma;
  ConvertibilityVerdict unital_forward;
  ConvertibilityVerdict unital_backward;
  ConvertibilityVerdict rare_forward;
  ConvertibilityVerdict rare_backward;
  ConvertibilityVerdict noisy_forward;
  /// Names of the expected outcomes that did not reproduce; empty on success.
  std::vector<std::string> failures;

  bool reproduced() const { return failures.empty(); }
};

CounterexampleReport counterexample_report(const Tolerance& tol = {});

}  // namespace microtherm
