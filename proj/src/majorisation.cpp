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

#include "microtherm/majorisation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace microtherm {

Spectrum::Spectrum(RealVector values, const Tolerance& tol) : values_(std::move(values)) {
  if (values_.size() == 0) throw Error(Errc::InvalidArgument, "empty spectrum");
  if (!values_.allFinite()) throw Error(Errc::InvalidArgument, "spectrum has non-finite entries");
  if (values_.minCoeff() < -tol.eq_tol) throw Error(Errc::InvalidArgument, "spectrum has negative entries");
  if (std::abs(values_.sum() - 1) > tol.eq_tol) throw Error(Errc::NotNormalized, "spectrum does not sum to 1");
  for (Index i = 1; i < values_.size(); ++i)
    if (values_(i) > values_(i - 1) + tol.eq_tol) throw Error(Errc::InvalidArgument, "spectrum is not descending");
}

Spectrum Spectrum::from_weights(const RealVector& weights, const Tolerance& tol) {
  if (weights.size() == 0) throw Error(Errc::InvalidArgument, "empty spectrum");
  RealVector w = weights;
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) < -tol.eq_tol) throw Error(Errc::InvalidState, "negative weight beyond tolerance");
    if (w(i) < tol.psd_tol) w(i) = 0;
  }
  const Real total = w.sum();
  if (total <= 0) throw Error(Errc::NotNormalized, "weights have zero total");
  w /= total;
  std::stable_sort(w.data(), w.data() + w.size(), std::greater<>());
  return Spectrum(std::move(w), tol);
}

Spectrum Spectrum::padded(Index n) const {
  if (n < size()) throw Error(Errc::LengthMismatch, "cannot pad to a shorter length");
  Spectrum out;
  out.values_ = RealVector::Zero(n);
  out.values_.head(size()) = values_;
  return out;
}

DoublyStochasticMatrix::DoublyStochasticMatrix(RealMatrix entries, const Tolerance& tol)
    : entries_(std::move(entries)) {
  if (!is_doubly_stochastic(entries_, tol)) throw Error(Errc::NotDoublyStochastic, "matrix is not doubly stochastic");
}

RealMatrix permutation_matrix(const PermutationImage& image) {
  const auto n = static_cast<Index>(image.size());
  RealMatrix p = RealMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) p(image[static_cast<size_t>(j)], j) = 1;
  return p;
}

RealMatrix BirkhoffDecomposition::reconstruct() const {
  if (terms.empty()) return {};
  RealMatrix out = RealMatrix::Zero(static_cast<Index>(terms.front().permutation.size()),
                                    static_cast<Index>(terms.front().permutation.size()));
  for (const auto& t : terms) out += t.weight * permutation_matrix(t.permutation);
  return out;
}

namespace {

std::pair<RealVector, RealVector> aligned(const Spectrum& p, const Spectrum& q, bool pad) {
  if (p.size() != q.size() && !pad) throw Error(Errc::LengthMismatch, "spectra have different lengths");
  const Index n = std::max(p.size(), q.size());
  return {p.padded(n).values(), q.padded(n).values()};
}

// Hungarian algorithm (potentials form), minimizing cost; returns row assigned to each column.
std::vector<Index> min_cost_assignment(const RealMatrix& cost) {
  const Index n = cost.rows();
  const Real inf = std::numeric_limits<Real>::infinity();
  std::vector<Real> u(n + 1, 0), v(n + 1, 0);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<Real> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      Real delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Real cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> row_of_col(n);
  for (Index j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

}  // namespace

Index first_majorisation_failure(const Spectrum& p, const Spectrum& q, const Tolerance& tol) {
  const auto [x, y] = aligned(p, q, true);
  Real sx = 0, sy = 0;
  for (Index k = 0; k < x.size(); ++k) {
    sx += x(k);
    sy += y(k);
    if (sx < sy - tol.eq_tol) return k;
  }
  if (std::abs(sx - sy) > tol.eq_tol) return x.size() - 1;
  return -1;
}

bool majorises(const Spectrum& p, const Spectrum& q, const Tolerance& tol, bool pad) {
  if (!pad && p.size() != q.size()) throw Error(Errc::LengthMismatch, "spectra have different lengths");
  return first_majorisation_failure(p, q, tol) < 0;
}

DoublyStochasticMatrix hlp_witness(const Spectrum& p, const Spectrum& q, const Tolerance& tol) {
  if (!majorises(p, q, tol)) throw Error(Errc::NotMajorised, "p does not majorise q");
  auto [x, target] = aligned(p, q, true);
  const Index n = x.size();
  RealMatrix d = RealMatrix::Identity(n, n);
  constexpr Real kGap = 1e-15;
  for (Index step = 0; step < 2 * n; ++step) {
    Index j = -1;
    for (Index i = n - 1; i >= 0; --i)
      if (x(i) > target(i) + kGap) {
        j = i;
        break;
      }
    if (j < 0) break;
    Index k = -1;
    for (Index i = j + 1; i < n; ++i)
      if (x(i) < target(i) - kGap) {
        k = i;
        break;
      }
    if (k < 0) break;
    const Real delta = std::min(x(j) - target(j), target(k) - x(k));
    const Real t = delta / (x(j) - x(k));
    // T = (1-t) I + t * swap(j,k), applied on the left.
    const RealVector row_j = d.row(j);
    const RealVector row_k = d.row(k);
    d.row(j) = (1 - t) * row_j + t * row_k;
    d.row(k) = (1 - t) * row_k + t * row_j;
    x(j) -= delta;
    x(k) += delta;
  }
  return DoublyStochasticMatrix(std::move(d), tol);
}

BirkhoffDecomposition birkhoff_decompose(const DoublyStochasticMatrix& dsm, const Tolerance& tol) {
  const RealMatrix& m = dsm.matrix();
  const Index n = m.rows();
  if (!is_doubly_stochastic(m, tol)) throw Error(Errc::NotDoublyStochastic, "matrix is not doubly stochastic");
  RealMatrix rest = m.cwiseMax(0.0);
  constexpr Real kZero = 1e-13;
  BirkhoffDecomposition out;
  for (Index iter = 0; iter < n * n + 1; ++iter) {
    rest = (rest.array() > kZero).select(rest, 0.0);
    if (rest.maxCoeff() <= kZero) break;
    // Maximize total weight on the support; off-support cells are prohibitively expensive.
    RealMatrix cost(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) cost(i, j) = rest(i, j) > 0 ? -rest(i, j) : Real(n + 1);
    const auto row_of_col = min_cost_assignment(cost);
    Real c = std::numeric_limits<Real>::infinity();
    for (Index j = 0; j < n; ++j) c = std::min(c, rest(row_of_col[static_cast<size_t>(j)], j));
    if (c <= 0) break;  // numerically exhausted support
    PermutationImage perm(row_of_col.begin(), row_of_col.end());
    for (Index j = 0; j < n; ++j) rest(perm[static_cast<size_t>(j)], j) -= c;
    out.terms.push_back({c, std::move(perm)});
  }
  Real total = 0;
  for (const auto& t : out.terms) total += t.weight;
  if (out.terms.empty() || std::abs(total - 1) > tol.eq_tol)
    throw Error(Errc::NotDoublyStochastic, "Birkhoff peeling did not exhaust the matrix");
  for (auto& t : out.terms) t.weight /= total;
  return out;
}

Real shannon_monotone(const Spectrum& p) {
  Real h = 0;
  for (Index i = 0; i < p.size(); ++i)
    if (p[i] > 0) h -= p[i] * std::log(p[i]);
  return -h;
}

Real renyi_monotone(const Spectrum& p, Real alpha) {
  if (!(alpha > 0) || alpha == 1) throw Error(Errc::InvalidAlpha, "Renyi order must be positive and not 1");
  if (std::isinf(alpha)) return std::log(p.values().maxCoeff());
  Real s = 0;
  for (Index i = 0; i < p.size(); ++i)
    if (p[i] > 0) s += std::pow(p[i], alpha);
  return -std::log(s) / (1 - alpha);
}

bool schur_convexity_probe(const SpectrumFunction& f, Index d, int trials, std::uint64_t seed, const Tolerance& tol) {
  if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, d - 1);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  bool ok = true;
  for (int t = 0; t < trials; ++t) {
    const RealVector p = random_probability_vector(d, rng);
    RealVector q = p;
    const int transforms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(2 * d));
    for (int s = 0; s < transforms && d > 1; ++s) {
      Index i = pick(rng), k = pick(rng);
      if (i == k) continue;
      const Real lam = unit(rng);
      const Real qi = q(i), qk = q(k);
      q(i) = lam * qi + (1 - lam) * qk;
      q(k) = lam * qk + (1 - lam) * qi;
    }
    const Spectrum sp = Spectrum::from_weights(p, tol);
    const Spectrum sq = Spectrum::from_weights(q, tol);
    if (f(sp) < f(sq) - tol.eq_tol) ok = false;
  }
  return ok;
}

}  // namespace microtherm
