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

// Independent oracles for the test suites. Nothing here calls into the library's
// majorisation code.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace microtherm::testing {

/// Phase-1 simplex (Bland's rule) for A x = b, x >= 0, with b >= 0.
/// Returns the minimal total infeasibility; ~0 means feasible.
double phase_one_infeasibility(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Whether some doubly stochastic D satisfies D p = q (linear feasibility over the d^2 entries).
bool doubly_stochastic_feasible(const Eigen::VectorXd& p, const Eigen::VectorXd& q, double tol = 1e-9);

/// Random probability vector (not sorted).
Eigen::VectorXd random_distribution(Eigen::Index d, std::mt19937_64& rng);

/// q = product of random T-transforms applied to p, so p majorises q by construction.
Eigen::VectorXd random_majorised(const Eigen::VectorXd& p, int transforms, std::mt19937_64& rng);

/// Descending copy.
Eigen::VectorXd sorted_desc(Eigen::VectorXd v);

}  // namespace microtherm::testing
