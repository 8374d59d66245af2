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

// JSON schemas. Complex matrices are {"re": [[...]], "im": [[...]]} in row-major order.
// A state is {"model": {"kind": "quantum", "d": 2}, "payload": {...}} with payload
//   classical:        {"probs": [...]}
//   quantum:          {"re": ..., "im": ...}
//   doubled-quantum:  {"block0": matrix, "block1": matrix}
//   square-bit/half-disk: {"xy": [x, y]}
// Composite models carry "factors": [model, model].

#pragma once

#include "microtherm/audit.hpp"
#include "microtherm/channels.hpp"
#include "microtherm/convertibility.hpp"
#include "microtherm/duality.hpp"
#include "microtherm/microcanonical.hpp"
#include "microtherm/models.hpp"

#include "json.hpp"

namespace microtherm {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json model_to_json(const TheoryModel& model);
TheoryModel model_from_json(const Json& j);

Json state_to_json(const State& s);
State state_from_json(const Json& j, const Tolerance& tol = {});

Json effect_to_json(const Effect& e);
Effect effect_from_json(const Json& j);

Json reversible_to_json(const Reversible& u);
Reversible reversible_from_json(const Json& j);

Json channel_to_json(const Channel& c);
Channel channel_from_json(const Json& j);

Json spectrum_to_json(const Spectrum& s);
Json realization_to_json(const NoisyRealization& n);
Json verdict_to_json(const ConvertibilityVerdict& v);
Json counterexample_to_json(const CounterexampleReport& r);
Json audit_to_json(const AuditReport& r);
Json invariant_report_to_json(const InvariantDistributionReport& r);

/// {"dims": [dA, dB], "re": [...], "im": [...]} with amplitudes listed row-major.
Json bipartite_to_json(const PureBipartiteState& psi);
PureBipartiteState bipartite_from_json(const Json& j, const Tolerance& tol = {});

}  // namespace microtherm
