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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace microtherm {

enum class CheckStatus { Pass, Fail, Info };

const char* check_status_name(CheckStatus s);

struct AuditEntry {
  std::string name;
  CheckStatus status = CheckStatus::Info;
  std::string details;
  /// Optional exhaustive-search rows, one line each.
  std::vector<std::string> table;
};

struct AuditReport {
  std::vector<AuditEntry> checks;

  const AuditEntry* find(const std::string& name) const;
  std::string text_table() const;
};

/// Reversible U with U a = b for pure a, b, if the reversible group provides one.
std::optional<Reversible> connecting_reversible(const State& a, const State& b, const Tolerance& tol = {});

/// Pure states of every kind are connected by reversibles, except on the half-disk.
AuditEntry check_transitivity(const TheoryModel& model, int trials, std::uint64_t seed, const Tolerance& tol = {});

/// Index of the dihedral element sending vertex from[k] to vertex to[k] for every k (0-based vertex indices).
std::optional<int> square_bit_element_mapping(const std::vector<int>& from, const std::vector<int>& to);

/// Every permutation of every perfectly distinguishable vertex pair is a dihedral element.
AuditEntry check_permutability_square_bit();

/// Fails: no dihedral element maps the side {alpha_1, alpha_2} onto the diagonal {alpha_1, alpha_3}.
AuditEntry check_strong_symmetry_square_bit();

/// Sampled control-unitary realizations (d <= 3, n <= 6) all fix chi within 1e-10.
AuditEntry check_noisy_subset_unital(int samples, std::uint64_t seed);

/// Two distinct reflection-invariant distributions on the half-disk arc.
AuditEntry check_half_disk_nonuniqueness();

AuditReport run_audit(int trials, std::uint64_t seed);

}  // namespace microtherm
