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


#include "microtherm/duality.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace microtherm {
namespace {

ComplexMatrix diagonal_amplitudes(std::initializer_list<Real> schmidt_squares) {
  const auto d = static_cast<Index>(schmidt_squares.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  Index i = 0;
  for (Real p : schmidt_squares) {
    m(i, i) = std::sqrt(p);
    ++i;
  }
  return m;
}

PureBipartiteState product2() { return PureBipartiteState::product(ComplexVector::Unit(2, 0), ComplexVector::Unit(2, 1)); }

RealVector padded_spectrum(const State& s, Index n) { return diagonalise(s).spectrum.padded(n).values(); }

TEST(Schmidt, Examples) {
  EXPECT_NEAR(schmidt(product2())[0], 1.0, 1e-12);
  const Spectrum bell = schmidt(PureBipartiteState::maximally_entangled(2));
  EXPECT_NEAR(bell[0], 0.5, 1e-12);
  EXPECT_NEAR(bell[1], 0.5, 1e-12);

  const auto psi = PureBipartiteState::random(3, 3, 4);
  EXPECT_LE(max_abs_diff(schmidt(psi).values(), diagonalise(marginal(psi.state(), Factor::A)).spectrum.values()), 1e-9);
}

TEST(Schmidt, RejectsUnnormalizedAmplitudes) {
  try {
    PureBipartiteState(ComplexMatrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotNormalized);
  }
}

TEST(Schmidt, MarginalSpectraAgree) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Index da = 1 + static_cast<Index>(seed % 4), db = 1 + static_cast<Index>((seed / 4) % 4);
    const auto psi = PureBipartiteState::random(da, db, seed);
    const State s = psi.state();
    const Index n = std::max(da, db);
    ASSERT_LE(max_abs_diff(padded_spectrum(marginal(s, Factor::A), n), padded_spectrum(marginal(s, Factor::B), n)),
              1e-9);
    ASSERT_LE(max_abs_diff(schmidt(psi).padded(n).values(), padded_spectrum(marginal(s, Factor::A), n)), 1e-9);
  }
}

TEST(Locc, Examples) {
  const auto bell = PureBipartiteState::maximally_entangled(2);
  EXPECT_TRUE(locc_convertible(bell, product2()));
  EXPECT_FALSE(locc_convertible(product2(), bell));

  const PureBipartiteState phi(diagonal_amplitudes({0.5, 0.3, 0.2}));
  const PureBipartiteState psi(diagonal_amplitudes({0.7, 0.2, 0.1}));
  EXPECT_TRUE(locc_convertible(phi, psi));
  EXPECT_FALSE(locc_convertible(psi, phi));
}

TEST(Locc, ClausesAgreeOnRandomPairs) {
  int yes = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Index da = 2 + static_cast<Index>(seed % 3), db = 2 + static_cast<Index>((seed / 3) % 3);
    const auto phi = PureBipartiteState::random(da, db, 2 * seed);
    // Every third target is a product state, which every state converts to.
    const auto psi = seed % 3 == 0 ? PureBipartiteState::product(ComplexVector::Unit(da, 0), ComplexVector::Unit(db, 0))
                                   : PureBipartiteState::random(da, db, 2 * seed + 1);
    const auto c = duality_clauses(phi, psi);
    ASSERT_TRUE(c.agree()) << seed;
    yes += c.schmidt_majorisation;
  }
  EXPECT_GT(yes, 100);
}

TEST(Locc, DimensionMismatchIsReported) {
  try {
    duality_clauses(PureBipartiteState::random(2, 2, 0), PureBipartiteState::random(2, 3, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Locc, EntropyIsMonotoneAlongConvertiblePairs) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto phi = PureBipartiteState::random(3, 3, seed);
    const auto psi = PureBipartiteState::random(3, 3, seed + 10000);
    if (locc_convertible(phi, psi)) { ASSERT_GE(entanglement_entropy(phi), entanglement_entropy(psi) - 1e-9); }
    if (locc_convertible(psi, phi)) { ASSERT_GE(entanglement_entropy(psi), entanglement_entropy(phi) - 1e-9); }
  }
}

TEST(Purification, Examples) {
  const ComplexMatrix pure = ComplexVector::Unit(3, 1) * ComplexVector::Unit(3, 1).adjoint();
  const auto p = symmetric_purification(State::quantum(pure));
  EXPECT_NEAR(schmidt(p)[0], 1.0, 1e-12);
  EXPECT_LE(max_abs_diff(p.amplitudes(), pure), 1e-12);

  const auto half = symmetric_purification(State::quantum(ComplexMatrix::Identity(2, 2) / 2.0));
  EXPECT_NEAR(entanglement_entropy(half), std::log(2.0), 1e-12);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.7;
  d(1, 1) = 0.3;
  const auto pd = symmetric_purification(State::quantum(d));
  EXPECT_LE(max_abs_diff(marginal(pd.state(), Factor::A).density(), d), 1e-10);
  EXPECT_LE(max_abs_diff(marginal(pd.state(), Factor::B).density(), d), 1e-10);
}

TEST(Purification, BothMarginalsRecoverRho) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const State rho = random_state(TheoryModel::quantum(1 + static_cast<Index>(seed % 5)), seed);
    const State psi = symmetric_purification(rho).state();
    ASSERT_LE(max_abs_diff(marginal(psi, Factor::A).density(), rho.density()), 1e-10);
    ASSERT_LE(max_abs_diff(marginal(psi, Factor::B).density(), rho.density()), 1e-10);
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entanglement_entropy(product2()), 0.0, 1e-15);
  EXPECT_NEAR(entanglement_entropy(PureBipartiteState::maximally_entangled(2)), std::log(2.0), 1e-12);
  EXPECT_NEAR(entanglement_entropy(PureBipartiteState(diagonal_amplitudes({0.5, 0.25, 0.25}))), 1.5 * std::log(2.0),
              1e-12);
}

TEST(Exchange, Examples) {
  const auto prod = local_exchangeability_witness(product2());
  EXPECT_LE(prod.residual, 1e-9);
  const auto bell = local_exchangeability_witness(PureBipartiteState::maximally_entangled(2));
  EXPECT_LE(bell.residual, 1e-9);
  const auto r = local_exchangeability_witness(PureBipartiteState::random(3, 3, 12));
  EXPECT_LE(r.residual, 1e-9);
  EXPECT_TRUE(is_unitary(r.c_unitary, 1e-12));
  EXPECT_TRUE(is_unitary(r.d_unitary, 1e-12));
  try {
    local_exchangeability_witness(PureBipartiteState::random(2, 3, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Exchange, ResidualIsIndependentlySmall) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Index d = 1 + static_cast<Index>(seed % 4);
    const auto psi = PureBipartiteState::random(d, d, seed);
    const auto w = local_exchangeability_witness(psi);
    ASSERT_LE(w.residual, 1e-9);
    // Independent check through the density matrices: (C ⊗ D) Psi Psi^† (C ⊗ D)^† = SWAP Psi Psi^† SWAP.
    const ComplexMatrix cd = kron(w.c_unitary, w.d_unitary);
    const ComplexVector moved = cd * psi.ket();
    const ComplexVector swapped = PureBipartiteState(psi.amplitudes().transpose()).ket();
    ASSERT_LE(max_abs_diff(ComplexMatrix(moved * moved.adjoint()), ComplexMatrix(swapped * swapped.adjoint())), 1e-9);
  }
}

TEST(Exchange, RankDeficientStates) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexMatrix u = haar_random_unitary(4, seed);
    const auto psi = PureBipartiteState::product(u.col(0), u.col(1));
    ASSERT_LE(local_exchangeability_witness(psi).residual, 1e-9);
  }
}

TEST(PhaseAlignment, RemovesGlobalPhase) {
  const ComplexVector v = haar_random_unitary(4, 3).col(0);
  EXPECT_LE(phase_aligned_distance(v * std::polar(1.0, 0.7), v), 1e-15);
  EXPECT_GT(phase_aligned_distance(v, haar_random_unitary(4, 4).col(0)), 1e-3);
}

}  // namespace
}  // namespace microtherm
