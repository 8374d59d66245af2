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


#include "microtherm/models.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace microtherm {
namespace {

template <typename F>
void expect_error(Errc code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << errc_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

ComplexMatrix projector(Index d, Index k) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(k, k) = 1;
  return p;
}

std::vector<TheoryModel> single_models() {
  return {TheoryModel::classical(3), TheoryModel::quantum(2), TheoryModel::quantum(4),
          TheoryModel::doubled_quantum(2), TheoryModel::square_bit()};
}

// Hermitian matrix as a real vector of its independent entries.
void append_hermitian(const ComplexMatrix& m, std::vector<Real>& out) {
  for (Index i = 0; i < m.rows(); ++i) {
    out.push_back(m(i, i).real());
    for (Index j = i + 1; j < m.cols(); ++j) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  }
}

Index span_rank(const std::vector<State>& states) {
  std::vector<std::vector<Real>> rows;
  for (const auto& s : states) {
    std::vector<Real> v;
    append_hermitian(s.blocks().block0, v);
    append_hermitian(s.blocks().block1, v);
    rows.push_back(std::move(v));
  }
  RealMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  Eigen::ColPivHouseholderQR<RealMatrix> qr(m);
  qr.setThreshold(1e-9);
  return qr.rank();
}

TEST(Pairing, Examples) {
  const auto q = TheoryModel::quantum(2);
  EXPECT_NEAR(pair(Effect(q, projector(2, 0)), State::quantum(projector(2, 0))), 1.0, 1e-12);

  const Effect a1(TheoryModel::square_bit(), Eigen::Vector3d(0, 0.5, 0.5));
  EXPECT_NEAR(pair(a1, State::square_bit(-1, -1)), 0.0, 1e-12);

  RealVector e(3), p(3);
  e << 0, 1, 0;
  p << 0.2, 0.5, 0.3;
  EXPECT_NEAR(pair(Effect(TheoryModel::classical(3), e), State::classical(p)), 0.5, 1e-12);
}

TEST(DeterministicEffect, UnitOnEveryState) {
  for (const auto& model : single_models()) {
    const Effect u = deterministic_effect(model);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      ASSERT_NEAR(pair(u, random_state(model, seed)), 1.0, 1e-12) << model.name();
  }
  const auto sq = std::get<Eigen::Vector3d>(deterministic_effect(TheoryModel::square_bit()).payload());
  EXPECT_EQ(sq, Eigen::Vector3d(0, 0, 1));
  const auto blocks = std::get<SectorBlocks>(deterministic_effect(TheoryModel::doubled_quantum(2)).payload());
  EXPECT_EQ(blocks.block0, ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(blocks.block1, ComplexMatrix::Identity(2, 2));
}

TEST(Composition, Dimensions) {
  const auto q6 = compose_systems(TheoryModel::quantum(2), TheoryModel::quantum(3));
  EXPECT_EQ(q6.kind(), ModelKind::Quantum);
  EXPECT_EQ(q6.d(), 6);
  EXPECT_EQ(dimension(q6), 6);

  const auto dd = compose_systems(TheoryModel::doubled_quantum(2), TheoryModel::doubled_quantum(2));
  EXPECT_EQ(dd.kind(), ModelKind::DoubledQuantum);
  EXPECT_EQ(dd.d(), 8);
  EXPECT_EQ(dimension(dd), 16);

  expect_error(Errc::UnsupportedComposition,
               [] { compose_systems(TheoryModel::square_bit(), TheoryModel::quantum(2)); });
  expect_error(Errc::UnsupportedComposition,
               [] { compose_systems(TheoryModel::classical(2), TheoryModel::quantum(2)); });
}

TEST(Composition, InformationLocality) {
  const std::vector<std::pair<TheoryModel, TheoryModel>> pairs{
      {TheoryModel::classical(2), TheoryModel::classical(5)},
      {TheoryModel::quantum(3), TheoryModel::quantum(4)},
      {TheoryModel::doubled_quantum(1), TheoryModel::doubled_quantum(3)},
      {TheoryModel::doubled_quantum(2), TheoryModel::doubled_quantum(2)}};
  for (const auto& [a, b] : pairs)
    EXPECT_EQ(dimension(compose_systems(a, b)), dimension(a) * dimension(b)) << a.name() << " x " << b.name();
}

TEST(TensorStates, Examples) {
  const State t = tensor_states(State::quantum(projector(2, 0)), State::quantum(projector(2, 1)));
  EXPECT_LE(max_abs_diff(t.density(), projector(4, 1)), 1e-12);

  RealVector a(2), b(2), expected(4);
  a << 1, 0;
  b << 0.5, 0.5;
  expected << 0.5, 0.5, 0, 0;
  EXPECT_LE(max_abs_diff(tensor_states(State::classical(a), State::classical(b)).probabilities(), expected), 1e-12);

  const State s0 = State::doubled_quantum(projector(2, 0), ComplexMatrix::Zero(2, 2));
  const State s1 = State::doubled_quantum(ComplexMatrix::Zero(2, 2), projector(2, 0));
  const auto mass = [](const State& s) {
    return std::make_pair(s.blocks().block0.trace().real(), s.blocks().block1.trace().real());
  };
  const State cross = tensor_states(s0, s1);
  EXPECT_NEAR(mass(cross).first, 0.0, 1e-12);
  EXPECT_NEAR(mass(cross).second, 1.0, 1e-12);
  const State same = tensor_states(s1, s1);
  EXPECT_NEAR(mass(same).first, 1.0, 1e-12);
}

TEST(TensorStates, MarginalsRecoverFactors) {
  const std::vector<std::pair<TheoryModel, TheoryModel>> pairs{
      {TheoryModel::classical(2), TheoryModel::classical(3)},
      {TheoryModel::quantum(2), TheoryModel::quantum(3)},
      {TheoryModel::doubled_quantum(2), TheoryModel::doubled_quantum(2)},
      {TheoryModel::doubled_quantum(1), TheoryModel::doubled_quantum(3)}};
  for (const auto& [ma, mb] : pairs)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const State a = random_state(ma, seed), b = random_state(mb, seed + 100);
      const State ab = tensor_states(a, b);
      ASSERT_LE(distance_max(marginal(ab, Factor::A), a), 1e-12) << ma.name();
      ASSERT_LE(distance_max(marginal(ab, Factor::B), b), 1e-12) << mb.name();
    }
}

TEST(Marginal, BellStateIsMaximallyMixed) {
  ComplexVector ket = ComplexVector::Zero(4);
  ket(0) = ket(3) = 1 / std::sqrt(2.0);
  const State bell(compose_systems(TheoryModel::quantum(2), TheoryModel::quantum(2)), ComplexMatrix(ket * ket.adjoint()));
  EXPECT_LE(max_abs_diff(marginal(bell, Factor::A).density(), ComplexMatrix::Identity(2, 2) / 2.0), 1e-12);
  EXPECT_LE(max_abs_diff(marginal(bell, Factor::B).density(), ComplexMatrix::Identity(2, 2) / 2.0), 1e-12);
}

TEST(Marginal, DoubledCoherenceAcrossSectorsIsLost) {
  // (|0,0>|0,0> + |1,0>|1,0>)/sqrt 2 lies in sector 0 of the composite.
  const auto dd = compose_systems(TheoryModel::doubled_quantum(2), TheoryModel::doubled_quantum(2));
  ComplexVector v = ComplexVector::Zero(8);
  v(0) = v(4) = 1 / std::sqrt(2.0);
  const State psi(dd, SectorBlocks{v * v.adjoint(), ComplexMatrix::Zero(8, 8)});
  const State a = marginal(psi, Factor::A);
  EXPECT_LE(max_abs_diff(a.blocks().block0, projector(2, 0) / 2.0), 1e-12);
  EXPECT_LE(max_abs_diff(a.blocks().block1, projector(2, 0) / 2.0), 1e-12);
}

TEST(Reversibles, Examples) {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  EXPECT_LE(max_abs_diff(apply_reversible(Reversible::unitary(x), State::quantum(projector(2, 0))).density(),
                         projector(2, 1)),
            1e-12);

  const State flipped = apply_reversible(Reversible::square_bit(4), State::square_bit(-1, 1));
  EXPECT_EQ(flipped.point(), Eigen::Vector2d(-1, -1));
}

TEST(Reversibles, DoubledSectorMassIsPreserved) {
  const auto model = TheoryModel::doubled_quantum(3);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const State s = random_state(model, seed);
    const Reversible u = random_reversible(model, seed + 1000);
    const State t = apply_reversible(u, s);
    const Real m0 = s.blocks().block0.trace().real();
    const bool exchange = std::get<DoubledUnitary>(u.payload()).exchange;
    const Real t0 = t.blocks().block0.trace().real();
    ASSERT_NEAR(exchange ? 1 - t0 : t0, m0, 1e-12);
    // Non-exchanging elements keep each sector's mass in place.
    const State kept = apply_reversible(Reversible::doubled(haar_random_unitary(3, seed), haar_random_unitary(3, seed + 1)), s);
    ASSERT_NEAR(kept.blocks().block0.trace().real(), m0, 1e-12);
  }
}

TEST(Reversibles, InverseUndoes) {
  for (const auto& model : single_models())
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const State s = random_state(model, seed);
      const Reversible u = random_reversible(model, seed + 77);
      ASSERT_LE(distance_max(apply_reversible(inverse(u), apply_reversible(u, s)), s), 1e-9) << model.name();
    }
}

TEST(MaximalSets, Examples) {
  const auto c3 = standard_maximal_set(TheoryModel::classical(3));
  ASSERT_EQ(c3.size(), 3);
  for (Index j = 0; j < 3; ++j) {
    EXPECT_EQ(c3.states[static_cast<size_t>(j)].probabilities(), RealVector::Unit(3, j));
    EXPECT_EQ(std::get<RealVector>(c3.dagger_effects[static_cast<size_t>(j)].payload()), RealVector::Unit(3, j));
  }

  const auto q2 = pure_maximal_set(TheoryModel::quantum(2), 17);
  ComplexMatrix gram(2, 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      gram(i, j) = pure_ket(q2.states[static_cast<size_t>(i)]).dot(pure_ket(q2.states[static_cast<size_t>(j)]));
  EXPECT_LE(max_abs_diff(gram, ComplexMatrix::Identity(2, 2)), 1e-10);

  const auto dq = pure_maximal_set(TheoryModel::doubled_quantum(2), 3);
  ASSERT_EQ(dq.size(), 4);
  int in_sector0 = 0;
  for (const auto& s : dq.states) in_sector0 += pure_sector_ket(s).first == 0;
  EXPECT_EQ(in_sector0, 2);
}

TEST(MaximalSets, Biorthogonality) {
  std::vector<TheoryModel> models = single_models();
  models.push_back(compose_systems(TheoryModel::doubled_quantum(1), TheoryModel::doubled_quantum(2)));
  for (const auto& model : models)
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto set = pure_maximal_set(model, seed);
      ASSERT_EQ(set.size(), dimension(model)) << model.name();
      for (Index i = 0; i < set.size(); ++i)
        for (Index j = 0; j < set.size(); ++j)
          ASSERT_NEAR(pair(set.dagger_effects[static_cast<size_t>(i)], set.states[static_cast<size_t>(j)]),
                      i == j ? 1.0 : 0.0, 1e-9)
              << model.name() << " seed " << seed;
    }
}

TEST(Dagger, Examples) {
  const auto q = TheoryModel::quantum(2);
  ComplexVector ket(2);
  ket << Complex(0.6, 0), Complex(0, 0.8);
  const ComplexMatrix p = ket * ket.adjoint();
  EXPECT_LE(max_abs_diff(std::get<ComplexMatrix>(dagger(State::quantum(p)).payload()), p), 1e-12);

  EXPECT_EQ(std::get<RealVector>(dagger(State::classical(RealVector::Unit(3, 1))).payload()), RealVector::Unit(3, 1));

  const auto blocks =
      std::get<SectorBlocks>(dagger(State::doubled_quantum(ComplexMatrix::Zero(2, 2), projector(2, 0))).payload());
  EXPECT_LE(blocks.block0.norm(), 1e-12);
  EXPECT_LE(max_abs_diff(blocks.block1, projector(2, 0)), 1e-12);

  expect_error(Errc::NotPure, [] { dagger(State::quantum(ComplexMatrix::Identity(2, 2) / 2.0)); });
}

TEST(Diagonalise, Examples) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.7;
  d(1, 1) = 0.3;
  const auto q = diagonalise(State::quantum(d));
  EXPECT_NEAR(q.spectrum[0], 0.7, 1e-12);
  EXPECT_NEAR(q.spectrum[1], 0.3, 1e-12);
  EXPECT_LE(max_abs_diff(q.eigenstates[0].density(), projector(2, 0)), 1e-12);

  const State sigma = State::doubled_quantum(projector(2, 0) / 2.0, projector(2, 0) / 2.0);
  const auto ds = diagonalise(sigma);
  EXPECT_NEAR(ds.spectrum[0], 0.5, 1e-12);
  EXPECT_NEAR(ds.spectrum[1], 0.5, 1e-12);
  EXPECT_NE(pure_sector_ket(ds.eigenstates[0]).first, pure_sector_ket(ds.eigenstates[1]).first);

  RealVector p(3);
  p << 0.2, 0.5, 0.3;
  const auto c = diagonalise(State::classical(p));
  EXPECT_NEAR(c.spectrum[0], 0.5, 1e-12);
  EXPECT_NEAR(c.spectrum[1], 0.3, 1e-12);
  EXPECT_NEAR(c.spectrum[2], 0.2, 1e-12);

  EXPECT_TRUE(diagonalise(State::square_bit(0.2, -0.3)).non_unique);
  EXPECT_FALSE(q.non_unique);
}

TEST(Diagonalise, ReconstructsAndIsReversibleInvariant) {
  std::vector<TheoryModel> models = single_models();
  models.push_back(TheoryModel::half_disk());
  for (const auto& model : models)
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const State s = random_state(model, seed);
      const auto dz = diagonalise(s);
      std::vector<Real> w(dz.spectrum.values().data(), dz.spectrum.values().data() + dz.spectrum.size());
      w.resize(dz.eigenstates.size(), 0.0);
      ASSERT_LE(distance_max(mixture(w, dz.eigenstates), s), 1e-9) << model.name();
      for (const auto& e : dz.eigenstates) ASSERT_TRUE(is_pure(e)) << model.name();
      if (dz.non_unique) continue;
      const auto moved = diagonalise(apply_reversible(random_reversible(model, seed + 5), s));
      ASSERT_LE(max_abs_diff(moved.spectrum.values(), dz.spectrum.values()), 1e-9) << model.name();
    }
}

TEST(Validation, RejectsInvalidStates) {
  RealVector bad(2);
  bad << 0.7, 0.7;
  expect_error(Errc::NotNormalized, [&] { State::classical(bad); });
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  expect_error(Errc::InvalidState, [&] { State::quantum(neg); });
  expect_error(Errc::InvalidState, [] { State::square_bit(1.5, 0); });
  expect_error(Errc::InvalidState, [] { State::half_disk(0, -0.5); });
}

TEST(DoubledComposite, LocalTomographyFails) {
  const auto a = TheoryModel::doubled_quantum(2);
  const auto dd = compose_systems(a, a);
  std::vector<State> products, general;
  for (std::uint64_t seed = 0; seed < 160; ++seed) {
    products.push_back(tensor_states(random_state(a, seed), random_state(a, seed + 5000)));
    general.push_back(random_state(dd, seed));
  }
  EXPECT_EQ(span_rank(products), 64);
  EXPECT_EQ(span_rank(general), 128);
}

TEST(DoubledComposite, SectorIndicesPartitionTheFullSpace) {
  const auto s0 = doubled_composite_sector_indices(2, 3, 0);
  const auto s1 = doubled_composite_sector_indices(2, 3, 1);
  ASSERT_EQ(s0.size(), 12u);
  ASSERT_EQ(s1.size(), 12u);
  std::vector<Index> all(s0);
  all.insert(all.end(), s1.begin(), s1.end());
  std::sort(all.begin(), all.end());
  for (Index k = 0; k < 24; ++k) EXPECT_EQ(all[static_cast<size_t>(k)], k);
  EXPECT_EQ(s0[0], 0);
}

}  // namespace
}  // namespace microtherm
