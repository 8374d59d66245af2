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


#include "microtherm/channels.hpp"
#include "microtherm/microcanonical.hpp"

#include "lp_oracle.hpp"

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

ComplexMatrix pauli(char which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case 'x': m(0, 1) = m(1, 0) = 1; break;
    case 'y': m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    default: m(0, 0) = 1; m(1, 1) = -1; break;
  }
  return m;
}

// Random doubly stochastic matrix as a mixture of permutation matrices.
DoublyStochasticMatrix random_doubly_stochastic(Index d, std::mt19937_64& rng) {
  RealMatrix m = RealMatrix::Zero(d, d);
  PermutationImage perm(static_cast<size_t>(d));
  std::iota(perm.begin(), perm.end(), Index{0});
  const RealVector w = testing::random_distribution(4, rng);
  for (Index k = 0; k < 4; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    m += w(k) * permutation_matrix(perm);
  }
  return DoublyStochasticMatrix(m);
}

Channel replace_with(const State& target) {
  return Channel(target.model(), target.model(),
                 MeasureAndPrepare{{deterministic_effect(target.model())}, {target}});
}

Channel random_rare(const TheoryModel& model, Index terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const RealVector w = testing::random_distribution(terms, rng);
  MixtureOfReversibles mix;
  for (Index k = 0; k < terms; ++k) mix.terms.push_back({w(k), random_reversible(model, rng())});
  return Channel(model, model, std::move(mix));
}

Channel rational_rare(Index d, std::vector<Index> numerators, std::uint64_t seed) {
  Index n = 0;
  for (Index k : numerators) n += k;
  MixtureOfReversibles mix;
  for (size_t k = 0; k < numerators.size(); ++k)
    mix.terms.push_back({static_cast<Real>(numerators[k]) / static_cast<Real>(n),
                         Reversible::unitary(haar_random_unitary(d, derive_seed(seed, k)))});
  const auto model = TheoryModel::quantum(d);
  return Channel(model, model, std::move(mix));
}

std::vector<TheoryModel> channel_models() {
  return {TheoryModel::classical(4), TheoryModel::quantum(3), TheoryModel::doubled_quantum(2)};
}

TEST(ApplyChannel, IdentityAndSingleReversible) {
  for (const auto& model : channel_models())
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const State s = random_state(model, seed);
      ASSERT_LE(distance_max(apply_channel(Channel::identity(model), s), s), 1e-15);
      const Reversible u = random_reversible(model, seed + 3);
      ASSERT_LE(distance_max(apply_channel(Channel::reversible(u), s), apply_reversible(u, s)), 1e-15);
    }
}

TEST(ApplyChannel, MeasureAndPrepareOnChi) {
  const auto model = TheoryModel::quantum(3);
  const auto basis = pure_maximal_set(model, 1);
  std::vector<State> prepared;
  for (std::uint64_t k = 0; k < 3; ++k) prepared.push_back(random_state(model, 40 + k));
  const Channel c(model, model, MeasureAndPrepare{basis.dagger_effects, prepared});
  const std::vector<Real> third(3, 1.0 / 3.0);
  EXPECT_LE(distance_max(apply_channel(c, microcanonical_state(model)), mixture(third, prepared)), 1e-12);
}

TEST(ApplyChannel, ModelMismatchIsRejected) {
  expect_error(Errc::ModelMismatch, [] {
    apply_channel(Channel::identity(TheoryModel::quantum(2)), random_state(TheoryModel::quantum(3), 0));
  });
}

TEST(ApplyChannel, IsLinear) {
  const auto model = TheoryModel::quantum(3);
  const Channel c = landau_streater(1.0);
  const State a = random_state(model, 1), b = random_state(model, 2);
  const std::vector<Real> w{0.3, 0.7};
  const std::vector<State> ab{a, b};
  const std::vector<State> images{apply_channel(c, a), apply_channel(c, b)};
  EXPECT_LE(distance_max(apply_channel(c, mixture(w, ab)), mixture(w, images)), 1e-14);
}

TEST(Unitality, Examples) {
  for (const auto& model : channel_models())
    for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_TRUE(is_unital(random_rare(model, 3, seed), 1e-12));
  EXPECT_TRUE(is_unital(landau_streater(1.0), 1e-12));
  EXPECT_FALSE(is_unital(replace_with(random_pure_state(TheoryModel::quantum(2), 0)), 1e-9));
  expect_error(Errc::NotMicrocanonical,
               [] { unitality_defect(Channel::identity(TheoryModel::half_disk())); });
}

TEST(UnitalFromDoublyStochastic, Examples) {
  const auto model = TheoryModel::quantum(3);
  const auto basis = pure_maximal_set(model, 6);
  const Channel id = unital_from_doubly_stochastic(model, DoublyStochasticMatrix(RealMatrix::Identity(3, 3)), basis, basis);
  RealVector p(3);
  p << 0.5, 0.3, 0.2;
  const State diag = mixture(std::vector<Real>{0.5, 0.3, 0.2}, basis.states);
  EXPECT_LE(distance_max(apply_channel(id, diag), diag), 1e-12);

  const Channel flat = unital_from_doubly_stochastic(model, DoublyStochasticMatrix(RealMatrix::Constant(3, 3, 1.0 / 3)),
                                                     basis, basis);
  for (const auto& s : basis.states)
    EXPECT_LE(distance_max(apply_channel(flat, s), microcanonical_state(model)), 1e-12);

  const Spectrum ps(p), qs((RealVector(3) << 0.4, 0.35, 0.25).finished());
  const auto out_basis = pure_maximal_set(model, 7);
  const Channel c = unital_from_doubly_stochastic(model, hlp_witness(ps, qs), basis, out_basis);
  const State sigma = mixture(std::vector<Real>{0.4, 0.35, 0.25}, out_basis.states);
  EXPECT_LE(distance_max(apply_channel(c, diag), sigma), 1e-9);
  EXPECT_TRUE(is_unital(c, 1e-12));

  expect_error(Errc::DimensionMismatch, [&] {
    unital_from_doubly_stochastic(model, DoublyStochasticMatrix(RealMatrix::Identity(2, 2)), basis, basis);
  });
}

TEST(DoublyStochasticFromChannel, Examples) {
  const auto model = TheoryModel::quantum(3);
  const auto basis = pure_maximal_set(model, 2);
  const auto id = doubly_stochastic_from_channel(Channel::identity(model), basis, basis);
  EXPECT_TRUE(id.doubly_stochastic);
  EXPECT_LE(max_abs_diff(id.matrix, RealMatrix::Identity(3, 3)), 1e-12);

  const auto flat = doubly_stochastic_from_channel(replace_with(microcanonical_state(model)), basis, basis);
  EXPECT_LE(max_abs_diff(flat.matrix, RealMatrix::Constant(3, 3, 1.0 / 3)), 1e-12);

  const auto bad = doubly_stochastic_from_channel(replace_with(basis.states[0]), basis, basis);
  EXPECT_FALSE(bad.doubly_stochastic);
  EXPECT_NEAR(bad.matrix.row(0).sum(), 3.0, 1e-12);
}

TEST(DoublyStochasticFromChannel, RoundTrip) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 4;
    const TheoryModel model = trial % 3 == 0 ? TheoryModel::classical(d)
                              : trial % 3 == 1 ? TheoryModel::quantum(d)
                                               : TheoryModel::doubled_quantum(1 + trial % 2);
    const Index n = dimension(model);
    const auto dm = random_doubly_stochastic(n, rng);
    const auto in = pure_maximal_set(model, rng()), out = pure_maximal_set(model, rng());
    const auto back = doubly_stochastic_from_channel(unital_from_doubly_stochastic(model, dm, in, out), in, out);
    ASSERT_TRUE(back.doubly_stochastic);
    ASSERT_LE(max_abs_diff(back.matrix, dm.matrix()), 1e-9) << model.name();
  }
}

TEST(RareFromBirkhoff, Examples) {
  const auto model = TheoryModel::quantum(3);
  const auto basis = pure_maximal_set(model, 3);
  const Channel single = rare_from_birkhoff(model, basis, basis, DoublyStochasticMatrix(permutation_matrix({1, 2, 0})));
  EXPECT_EQ(std::get<MixtureOfReversibles>(single.representation()).terms.size(), 1u);
  EXPECT_LE(distance_max(apply_channel(single, basis.states[0]), basis.states[1]), 1e-12);

  const auto q2 = TheoryModel::quantum(2);
  const auto std2 = standard_maximal_set(q2);
  const Channel half = rare_from_birkhoff(q2, std2, std2, DoublyStochasticMatrix(RealMatrix::Constant(2, 2, 0.5)));
  EXPECT_LE(distance_max(apply_channel(half, std2.states[0]), microcanonical_state(q2)), 1e-12);

  const Spectrum p((RealVector(3) << 0.6, 0.3, 0.1).finished());
  const Spectrum q((RealVector(3) << 0.5, 0.25, 0.25).finished());
  const auto out = pure_maximal_set(model, 9);
  const Channel r = rare_from_birkhoff(model, basis, out, hlp_witness(p, q));
  const State rho = mixture(std::vector<Real>{0.6, 0.3, 0.1}, basis.states);
  const State sigma = mixture(std::vector<Real>{0.5, 0.25, 0.25}, out.states);
  EXPECT_LE(distance_max(apply_channel(r, rho), sigma), 1e-8);
}

TEST(RareFromBirkhoff, SpectrumIsMappedByTheMatrix) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 3;
    const TheoryModel model = trial % 2 ? TheoryModel::quantum(d) : TheoryModel::classical(d);
    const auto in = pure_maximal_set(model, rng()), out = pure_maximal_set(model, rng());
    const auto dm = random_doubly_stochastic(d, rng);
    const RealVector p = testing::random_distribution(d, rng);
    const std::vector<Real> pw(p.data(), p.data() + d);
    const RealVector q = dm.matrix() * p;
    const std::vector<Real> qw(q.data(), q.data() + d);
    const Channel r = rare_from_birkhoff(model, in, out, dm);
    ASSERT_LE(distance_max(apply_channel(r, mixture(pw, in.states)), mixture(qw, out.states)), 1e-9);
    ASSERT_TRUE(is_unital(r, 1e-10));
    ASSERT_LE(trace_preservation_defect(r), 1e-10);
  }
}

TEST(RareFromBirkhoff, DoubledSectorsAndSquareBit) {
  const auto model = TheoryModel::doubled_quantum(1);
  const auto basis = standard_maximal_set(model);
  // Exchanging the two sectors is a single reversible.
  const Channel swap = rare_from_birkhoff(model, basis, basis, DoublyStochasticMatrix(permutation_matrix({1, 0})));
  EXPECT_LE(distance_max(apply_channel(swap, basis.states[0]), basis.states[1]), 1e-12);

  const auto d2 = TheoryModel::doubled_quantum(2);
  const auto b2 = standard_maximal_set(d2);
  // Sends |0,0> to sector 1 but keeps |0,1> in sector 0.
  expect_error(Errc::UnsupportedModel, [&] {
    rare_from_birkhoff(d2, b2, b2, DoublyStochasticMatrix(permutation_matrix({2, 1, 0, 3})));
  });

  const auto sq = TheoryModel::square_bit();
  const auto sb = standard_maximal_set(sq);
  expect_error(Errc::UnsupportedModel,
               [&] { rare_from_birkhoff(sq, sb, sb, DoublyStochasticMatrix(RealMatrix::Identity(2, 2))); });
}

TEST(InclusionChain, RareAndNoisyChannelsAreUnital) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 3;
    const auto model = TheoryModel::quantum(d);
    const auto basis = pure_maximal_set(model, rng());
    const Channel r = rare_from_birkhoff(model, basis, basis, random_doubly_stochastic(d, rng));
    ASSERT_TRUE(is_unital(r, 1e-10));
    const auto nr = noisy_realization(rationalize_channel(r).first);
    ASSERT_TRUE(noisy_is_unital_check(nr));
    ASSERT_TRUE(is_basic_noisy(nr));
  }
}

TEST(Rationalize, Weights) {
  const std::vector<Real> w{2.0 / 3.0, 1.0 / 3.0};
  const auto r = rationalize_weights(w);
  EXPECT_EQ(r.denominator, 3);
  EXPECT_EQ(r.numerators, (std::vector<Index>{2, 1}));
  EXPECT_LE(r.max_error, 1e-15);

  const std::vector<Real> irrational{1 / std::sqrt(2.0), 1 - 1 / std::sqrt(2.0)};
  const auto ir = rationalize_weights(irrational);
  EXPECT_LE(ir.denominator, 10000);
  EXPECT_GT(ir.max_error, 0.0);
  EXPECT_LE(ir.max_error, 1e-4);
  Index total = 0;
  for (Index k : ir.numerators) total += k;
  EXPECT_EQ(total, ir.denominator);
}

TEST(NoisyRealization, Examples) {
  const Channel one = rational_rare(2, {1}, 1);
  const auto n1 = noisy_realization(one);
  EXPECT_EQ(n1.ancilla_model.d(), 1);
  ASSERT_EQ(n1.controls.size(), 1u);
  EXPECT_EQ(n1.controls[0].multiplicity, 1);

  const Channel half = rational_rare(2, {1, 1}, 2);
  const auto n2 = noisy_realization(half);
  EXPECT_EQ(n2.ancilla_model.d(), 2);
  const auto& terms = std::get<MixtureOfReversibles>(half.representation()).terms;
  const ComplexMatrix& u1 = std::get<ComplexMatrix>(terms[0].reversible.payload());
  const ComplexMatrix& u2 = std::get<ComplexMatrix>(terms[1].reversible.payload());
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  const ComplexMatrix expected = kron(u1, p0) + kron(u2, p1);
  EXPECT_LE(max_abs_diff(std::get<ComplexMatrix>(n2.global_reversible().payload()), expected), 1e-15);

  const Channel thirds = rational_rare(3, {2, 1}, 3);
  const auto n3 = noisy_realization(thirds);
  EXPECT_EQ(n3.ancilla_model.d(), 3);
  ASSERT_EQ(n3.controls.size(), 2u);
  EXPECT_EQ(n3.controls[0].multiplicity, 2);
  EXPECT_EQ(n3.controls[1].multiplicity, 1);
  EXPECT_EQ(n3.controlled_unitary(0), n3.controlled_unitary(1));
  EXPECT_NE(n3.controlled_unitary(1), n3.controlled_unitary(2));
  EXPECT_EQ(n3.ancilla_state().density(), ComplexMatrix::Identity(3, 3) / 3.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const State s = random_state(TheoryModel::quantum(3), seed);
    ASSERT_LE(distance_max(apply_noisy_realization(n3, s), apply_channel(thirds, s)), 1e-9);
  }
}

TEST(NoisyRealization, RejectsIrrationalWeightsAndOtherModels) {
  const auto model = TheoryModel::quantum(2);
  const Real w = 1 / std::sqrt(2.0);
  const Channel c(model, model,
                  MixtureOfReversibles{{{w, Reversible::unitary(pauli('x'))}, {1 - w, Reversible::unitary(pauli('z'))}}});
  expect_error(Errc::IrrationalWeights, [&] { noisy_realization(c); });
  const auto [rational, error] = rationalize_channel(c);
  EXPECT_GT(error, 0.0);
  EXPECT_LE(error, 1e-4);
  EXPECT_NO_THROW(noisy_realization(rational));
  expect_error(Errc::UnsupportedModel, [] { noisy_realization(random_rare(TheoryModel::classical(3), 2, 1)); });
}

TEST(NoisyRealization, LargeDenominatorsStayCompact) {
  const auto model = TheoryModel::quantum(3);
  const Real w = 1 / std::sqrt(3.0);
  const Channel c(model, model,
                  MixtureOfReversibles{{{w, Reversible::unitary(haar_random_unitary(3, 1))},
                                        {1 - w, Reversible::unitary(haar_random_unitary(3, 2))}}});
  const auto [rational, error] = rationalize_channel(c);
  const auto nr = noisy_realization(rational);
  EXPECT_GT(nr.ancilla_model.d(), 64);
  EXPECT_EQ(nr.controls.size(), 2u);
  EXPECT_TRUE(is_basic_noisy(nr));
  EXPECT_TRUE(noisy_is_unital_check(nr));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const State s = random_state(model, seed);
    ASSERT_LE(distance_max(apply_noisy_realization(nr, s), apply_channel(c, s)), 2 * error + 1e-12);
  }
}

TEST(NoisyRealization, AgreesWithTheMixtureOnSpanningSets) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 2 + trial % 3;
    std::vector<Index> nums;
    Index left = 1 + static_cast<Index>(rng() % 8);
    while (left > 0) {
      const Index k = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(left));
      nums.push_back(k);
      left -= k;
    }
    const Channel r = rational_rare(d, nums, rng());
    const auto nr = noisy_realization(r);
    const Real gap = spanning_set_distance(
        r.input(), [&](const State& s) { return apply_noisy_realization(nr, s); },
        [&](const State& s) { return apply_channel(r, s); }, static_cast<std::uint64_t>(trial));
    ASSERT_LE(gap, 1e-9);
  }
}

TEST(NoisyRealization, NonChiAncillaIsNotBasic) {
  const auto model = TheoryModel::quantum(2);
  const auto anc = TheoryModel::quantum(2);
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1;
  const NoisyRealization nr{model, anc, {{1, pauli('x')}, {1, pauli('z')}}, State::quantum(zero)};
  EXPECT_FALSE(is_basic_noisy(nr));
  // The ancilla selects the first control branch only.
  const State s = random_state(model, 4);
  EXPECT_LE(distance_max(apply_noisy_realization(nr, s), apply_reversible(Reversible::unitary(pauli('x')), s)), 1e-12);

  const NoisyRealization id{model, TheoryModel::quantum(1), {{1, ComplexMatrix::Identity(2, 2)}}, std::nullopt};
  EXPECT_TRUE(is_basic_noisy(id));
  EXPECT_TRUE(noisy_is_unital_check(id));
}

TEST(LandauStreater, SpinOperatorsSatisfyTheAlgebra) {
  for (Real j : {0.5, 1.0, 1.5, 2.0}) {
    const auto [jx, jy, jz] = spin_operators(j);
    const Index n = jx.rows();
    const Complex i(0, 1);
    EXPECT_LE(max_abs_diff(ComplexMatrix(jx * jy - jy * jx), ComplexMatrix(i * jz)), 1e-12);
    const ComplexMatrix casimir = jx * jx + jy * jy + jz * jz;
    EXPECT_LE(max_abs_diff(casimir, ComplexMatrix(j * (j + 1) * ComplexMatrix::Identity(n, n))), 1e-12);
    EXPECT_NEAR(jz(0, 0).real(), j, 1e-15);
  }
  expect_error(Errc::InvalidArgument, [] { spin_operators(0.7); });
}

TEST(LandauStreater, UnitalAndTracePreserving) {
  for (Real j : {0.5, 1.0, 1.5}) {
    const Channel c = landau_streater(j);
    EXPECT_LE(unitality_defect(c), 1e-12);
    EXPECT_LE(trace_preservation_defect(c), 1e-12);
  }
  const auto chi = microcanonical_state(TheoryModel::quantum(3));
  EXPECT_LE(distance_max(apply_channel(landau_streater(1.0), chi), chi), 1e-12);
}

TEST(LandauStreater, SpinHalfIsAPauliMixture) {
  const auto model = TheoryModel::quantum(2);
  const Channel pauli_mix(model, model,
                          MixtureOfReversibles{{{1.0 / 3, Reversible::unitary(pauli('x'))},
                                                {1.0 / 3, Reversible::unitary(pauli('y'))},
                                                {1.0 / 3, Reversible::unitary(pauli('z'))}}});
  const Channel ls = landau_streater(0.5);
  EXPECT_LE(spanning_set_distance(
                model, [&](const State& s) { return apply_channel(ls, s); },
                [&](const State& s) { return apply_channel(pauli_mix, s); }),
            1e-12);
}

TEST(ChannelValidation, RejectsMalformedChannels) {
  const auto model = TheoryModel::quantum(2);
  expect_error(Errc::NotNormalized, [&] {
    Channel(model, model, MixtureOfReversibles{{{0.6, Reversible::unitary(pauli('x'))}}});
  });
  expect_error(Errc::InvalidArgument, [&] { Channel(model, model, OperatorSum{{pauli('x') * 0.5}}); });
  expect_error(Errc::DimensionMismatch,
               [&] { Channel(model, model, OperatorSum{{ComplexMatrix::Identity(3, 3)}}); });
}

TEST(ChannelValidation, TracePreservationOfConstructedChannels) {
  std::mt19937_64 rng(47);
  for (const auto& model : channel_models()) {
    EXPECT_LE(trace_preservation_defect(random_rare(model, 3, rng())), 1e-10);
    const auto basis = pure_maximal_set(model, rng());
    const auto dm = random_doubly_stochastic(dimension(model), rng);
    EXPECT_LE(trace_preservation_defect(unital_from_doubly_stochastic(model, dm, basis, basis)), 1e-10);
  }
}

}  // namespace
}  // namespace microtherm
