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

#include "microtherm/numerics.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace microtherm {

/// Descending, nonnegative, unit-sum vector. Construction validates; use
/// from_weights() to sort, clamp float noise and renormalize raw eigenvalues.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(RealVector values, const Tolerance& tol = {});

  static Spectrum from_weights(const RealVector& weights, const Tolerance& tol = {});

  const RealVector& values() const { return values_; }
  Index size() const { return values_.size(); }
  Real operator[](Index i) const { return values_(i); }

  /// Zero-padded copy of length n (n >= size()).
  Spectrum padded(Index n) const;

 private:
  RealVector values_;
};

class DoublyStochasticMatrix {
 public:
  DoublyStochasticMatrix() = default;
  explicit DoublyStochasticMatrix(RealMatrix entries, const Tolerance& tol = {});

  const RealMatrix& matrix() const { return entries_; }
  Index dim() const { return entries_.rows(); }

 private:
  RealMatrix entries_;
};

/// Permutation in image form: column j of the permutation matrix has its 1 in row image[j].
using PermutationImage = std::vector<Index>;

RealMatrix permutation_matrix(const PermutationImage& image);

struct BirkhoffTerm {
  Real weight = 0;
  PermutationImage permutation;
};

struct BirkhoffDecomposition {
  std::vector<BirkhoffTerm> terms;

  RealMatrix reconstruct() const;
};

/// p majorises q (p ⪰ q). Shorter vectors are zero-padded unless pad is false.
bool majorises(const Spectrum& p, const Spectrum& q, const Tolerance& tol = {}, bool pad = true);

/// Index of the first prefix where majorisation fails, or -1.
Index first_majorisation_failure(const Spectrum& p, const Spectrum& q, const Tolerance& tol = {});

/// Doubly stochastic D with D p = q, as a chain of at most d-1 T-transforms.
DoublyStochasticMatrix hlp_witness(const Spectrum& p, const Spectrum& q, const Tolerance& tol = {});

/// Greedy peeling along maximum-weight perfect matchings of the positive support.
BirkhoffDecomposition birkhoff_decompose(const DoublyStochasticMatrix& d, const Tolerance& tol = {});

/// Negative Shannon entropy (natural log, 0 log 0 = 0).
Real shannon_monotone(const Spectrum& p);

inline constexpr Real kAlphaInfinity = std::numeric_limits<Real>::infinity();

/// Negative Rényi entropy of order alpha (alpha > 0, alpha != 1, infinity allowed).
Real renyi_monotone(const Spectrum& p, Real alpha);

using SpectrumFunction = std::function<Real(const Spectrum&)>;

/// Random majorisation-ordered pairs p ⪰ q (q obtained from p by random T-transforms);
/// true iff f(p) >= f(q) - eq_tol on every trial.
bool schur_convexity_probe(const SpectrumFunction& f, Index d, int trials, std::uint64_t seed,
                           const Tolerance& tol = {});

}  // namespace microtherm
