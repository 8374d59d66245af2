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

#include "microtherm/convertibility.hpp"

#include <cmath>
#include <sstream>

namespace microtherm {

namespace {

void require_comparable(const State& rho, const State& sigma) {
  if (!(rho.model() == sigma.model()))
    throw Error(Errc::ModelMismatch, "states live on " + rho.model().name() + " and " + sigma.model().name());
}

bool is_geometric(const TheoryModel& m) { return m.kind() == ModelKind::SquareBit || m.kind() == ModelKind::HalfDisk; }

PureMaximalSet eigenbasis(const Diagonalisation& diag, const Tolerance& tol) {
  PureMaximalSet out;
  out.states = diag.eigenstates;
  for (const auto& s : out.states) out.dagger_effects.push_back(dagger(s, tol));
  return out;
}

std::string format_vector(std::initializer_list<Real> values) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (Real v : values) {
    if (!first) os << ", ";
    os << (std::abs(v) < 5e-13 ? 0.0 : v);
    first = false;
  }
  os << ')';
  return os.str();
}

std::string majorisation_obstruction(const Spectrum& p, const Spectrum& q, const Tolerance& tol) {
  return "majorisation fails at prefix " + std::to_string(first_majorisation_failure(p, q, tol) + 1);
}

void attach_witness(ConvertibilityVerdict& v, Channel witness, const State& rho, const State& sigma) {
  v.answer = Answer::Yes;
  v.witness_residual = distance_max(apply_channel(witness, rho), sigma);
  v.witness = std::move(witness);
}

struct Diagonal {
  Spectrum spectrum;
  ComplexMatrix basis;  // eigenvectors as columns, matching the spectrum order
};

Diagonal normalized_block(const ComplexMatrix& block, Real mass, const Tolerance& tol) {
  const auto eig = hermitian_eigendecomposition(ComplexMatrix(block / mass), tol);
  return {Spectrum::from_weights(eig.eigenvalues, tol), eig.eigenvectors};
}

using UnitaryTerms = std::vector<std::pair<Real, ComplexMatrix>>;

// Mixture of in-sector unitaries sending the normalized block `from` to `to`
// (Uhlmann), or nothing when majorisation fails.
std::optional<UnitaryTerms> sector_mixture(const Diagonal& from, const Diagonal& to, const Tolerance& tol) {
  if (!majorises(from.spectrum, to.spectrum, tol)) return std::nullopt;
  const auto bd = birkhoff_decompose(hlp_witness(from.spectrum, to.spectrum, tol), tol);
  UnitaryTerms out;
  for (const auto& t : bd.terms)
    out.emplace_back(t.weight, to.basis * permutation_matrix(t.permutation).cast<Complex>() * from.basis.adjoint());
  return out;
}

UnitaryTerms identity_terms(Index d) { return {{1.0, ComplexMatrix::Identity(d, d)}}; }

// Every pairing of a sector-0 term with a sector-1 term, weights multiplied.
void append_products(MixtureOfReversibles& mix, const TheoryModel& model, Real scale, const UnitaryTerms& t0,
                     const UnitaryTerms& t1, bool exchange) {
  for (const auto& [w0, u0] : t0)
    for (const auto& [w1, u1] : t1)
      mix.terms.push_back({scale * w0 * w1, Reversible(model, DoubledUnitary{u0, u1, exchange})});
}

ConvertibilityVerdict rare_doubled(const State& rho, const State& sigma, const Tolerance& tol) {
  ConvertibilityVerdict v;
  v.relation = Relation::RaRe;
  const ConvertibilityVerdict unital = unital_convertible(rho, sigma, tol);
  if (unital.answer == Answer::No) {
    v.answer = Answer::No;
    v.obstruction = *unital.obstruction;
    return v;
  }
  const TheoryModel& model = rho.model();
  const Index d = model.d();
  const auto [a0, a1] = dqt_sector_mass(rho);
  const auto [b0, b1] = dqt_sector_mass(sigma);
  const Real slack = tol.eq_tol;
  const bool same_mass = std::abs(a0 - b0) <= slack && std::abs(a1 - b1) <= slack;
  const std::string masses =
      "sector mass " + format_vector({a0, a1}) + (same_mass ? " = " : " ≠ ") + format_vector({b0, b1});

  // Reversibles either keep or swap the sector masses, so mixtures land in between.
  if (b0 < std::min(a0, a1) - slack || b0 > std::max(a0, a1) + slack) {
    v.answer = Answer::No;
    v.obstruction = masses + ": mixtures of sector-preserving and sector-exchanging reversibles cannot reach it";
    return v;
  }

  const std::array<Real, 2> a{a0, a1}, b{b0, b1};
  const std::array<const ComplexMatrix*, 2> rb{&rho.blocks().block0, &rho.blocks().block1};
  const std::array<const ComplexMatrix*, 2> sb{&sigma.blocks().block0, &sigma.blocks().block1};
  auto nonempty = [&](Real m) { return m > slack; };

  // rho inside a single sector: each block of sigma must be a unitary mixture of rho's block.
  for (int s = 0; s < 2; ++s) {
    if (nonempty(a[static_cast<size_t>(1 - s)])) continue;
    const Diagonal from = normalized_block(*rb[static_cast<size_t>(s)], a[static_cast<size_t>(s)], tol);
    MixtureOfReversibles mix;
    for (int t = 0; t < 2; ++t) {
      const Real bt = b[static_cast<size_t>(t)];
      if (!nonempty(bt)) continue;
      const auto terms = sector_mixture(from, normalized_block(*sb[static_cast<size_t>(t)], bt, tol), tol);
      if (!terms) {
        v.answer = Answer::No;
        v.obstruction = masses + ", and rho lies in sector " + std::to_string(s) + ": the normalized sector-" +
                        std::to_string(t) + " block of sigma is not majorised by the block spectrum of rho";
        return v;
      }
      // Content of rho sits in sector s; with exchange it is moved to sector t first.
      const bool exchange = t != s;
      const UnitaryTerms id = identity_terms(d);
      if (t == 0)
        append_products(mix, model, bt, *terms, id, exchange);
      else
        append_products(mix, model, bt, id, *terms, exchange);
    }
    attach_witness(v, Channel(model, model, std::move(mix), tol), rho, sigma);
    return v;
  }

  // rho occupies both sectors: try all-preserving and all-exchanging mixtures.
  for (const bool exchange : {false, true}) {
    bool ok = true;
    std::array<UnitaryTerms, 2> per_sector;
    for (int t = 0; t < 2 && ok; ++t) {
      const int s = exchange ? 1 - t : t;
      const Real from_mass = a[static_cast<size_t>(s)], to_mass = b[static_cast<size_t>(t)];
      if (std::abs(from_mass - to_mass) > slack) {
        ok = false;
        break;
      }
      const auto terms = sector_mixture(normalized_block(*rb[static_cast<size_t>(s)], from_mass, tol),
                                        normalized_block(*sb[static_cast<size_t>(t)], to_mass, tol), tol);
      if (!terms) ok = false;
      else per_sector[static_cast<size_t>(t)] = *terms;
    }
    if (!ok) continue;
    MixtureOfReversibles mix;
    append_products(mix, model, 1.0, per_sector[0], per_sector[1], exchange);
    attach_witness(v, Channel(model, model, std::move(mix), tol), rho, sigma);
    return v;
  }

  v.answer = Answer::Unknown;
  v.note = "sector mass " + format_vector({a0, a1}) + " -> " + format_vector({b0, b1}) +
           ": majorisation holds and the masses are reachable, but neither a sector-preserving nor a "
           "sector-exchanging mixture works; mixed strategies are not decided";
  return v;
}

}  // namespace

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::RaRe: return "rare";
    case Relation::Noisy: return "noisy";
    case Relation::Unital: return "unital";
  }
  return "?";
}

const char* answer_name(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Unknown: return "unknown";
  }
  return "?";
}

ConvertibilityVerdict unital_convertible(const State& rho, const State& sigma, const Tolerance& tol) {
  require_comparable(rho, sigma);
  if (is_geometric(rho.model()))
    throw Error(Errc::NonUniqueSpectrum, rho.model().name() + " states have no unique spectrum");
  ConvertibilityVerdict v;
  v.relation = Relation::Unital;
  const Diagonalisation dr = diagonalise(rho, tol);
  const Diagonalisation ds = diagonalise(sigma, tol);
  if (!majorises(dr.spectrum, ds.spectrum, tol)) {
    v.answer = Answer::No;
    v.obstruction = majorisation_obstruction(dr.spectrum, ds.spectrum, tol);
    return v;
  }
  const DoublyStochasticMatrix d = hlp_witness(dr.spectrum, ds.spectrum, tol);
  attach_witness(v, unital_from_doubly_stochastic(rho.model(), d, eigenbasis(dr, tol), eigenbasis(ds, tol)), rho,
                 sigma);
  return v;
}

ConvertibilityVerdict rare_convertible(const State& rho, const State& sigma, const Tolerance& tol) {
  require_comparable(rho, sigma);
  const TheoryModel& model = rho.model();
  if (is_geometric(model))
    throw Error(Errc::Unsupported, "RaRe convertibility is not decided for " + model.name());
  if (model.kind() == ModelKind::DoubledQuantum) return rare_doubled(rho, sigma, tol);

  ConvertibilityVerdict v;
  v.relation = Relation::RaRe;
  const Diagonalisation dr = diagonalise(rho, tol);
  const Diagonalisation ds = diagonalise(sigma, tol);
  if (!majorises(dr.spectrum, ds.spectrum, tol)) {
    v.answer = Answer::No;
    v.obstruction = majorisation_obstruction(dr.spectrum, ds.spectrum, tol);
    return v;
  }
  const DoublyStochasticMatrix d = hlp_witness(dr.spectrum, ds.spectrum, tol);
  attach_witness(v, rare_from_birkhoff(model, eigenbasis(dr, tol), eigenbasis(ds, tol), d, tol), rho, sigma);
  return v;
}

ConvertibilityVerdict noisy_convertible(const State& rho, const State& sigma, const Tolerance& tol) {
  require_comparable(rho, sigma);
  const TheoryModel& model = rho.model();
  if (is_geometric(model))
    throw Error(Errc::Unsupported, "noisy convertibility is not decided for " + model.name());

  ConvertibilityVerdict v;
  v.relation = Relation::Noisy;
  if (model.kind() == ModelKind::DoubledQuantum) {
    const ConvertibilityVerdict unital = unital_convertible(rho, sigma, tol);
    if (unital.answer == Answer::No) {
      v.answer = Answer::No;
      v.obstruction = unital.obstruction;
      return v;
    }
    ConvertibilityVerdict rare = rare_convertible(rho, sigma, tol);
    if (rare.answer == Answer::Yes) {
      v.answer = Answer::Yes;
      v.witness = std::move(rare.witness);
      v.witness_residual = rare.witness_residual;
      return v;
    }
    v.answer = Answer::Unknown;
    v.note = "unital conversion exists but RaRe answer is " + std::string(answer_name(rare.answer)) +
             "; noisy operations sit between the two and are not decided for this model";
    return v;
  }

  ConvertibilityVerdict rare = rare_convertible(rho, sigma, tol);
  v.answer = rare.answer;
  v.obstruction = std::move(rare.obstruction);
  v.witness = std::move(rare.witness);
  v.witness_residual = rare.witness_residual;
  if (v.answer == Answer::Yes && model.kind() == ModelKind::Quantum) {
    auto [rational, error] = rationalize_channel(*v.witness);
    v.realization = noisy_realization(rational, tol);
    v.realization_error = error;
  }
  return v;
}

std::pair<Real, Real> dqt_sector_mass(const State& s) {
  if (s.model().kind() != ModelKind::DoubledQuantum)
    throw Error(Errc::ModelMismatch, "sector mass needs a doubled-quantum state");
  return {s.blocks().block0.trace().real(), s.blocks().block1.trace().real()};
}

std::pair<State, State> dqt_counterexample_states() {
  ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2), rho1 = ComplexMatrix::Zero(2, 2);
  rho0(0, 0) = rho0(1, 1) = 0.5;
  ComplexMatrix sig0 = ComplexMatrix::Zero(2, 2), sig1 = ComplexMatrix::Zero(2, 2);
  sig0(0, 0) = 0.5;
  sig1(0, 0) = 0.5;
  return {State::doubled_quantum(rho0, rho1), State::doubled_quantum(sig0, sig1)};
}

CounterexampleReport counterexample_report(const Tolerance& tol) {
  auto [rho, sigma] = dqt_counterexample_states();
  CounterexampleReport r{rho,
                         sigma,
                         diagonalise(rho, tol).spectrum,
                         diagonalise(sigma, tol).spectrum,
                         dqt_sector_mass(rho),
                         dqt_sector_mass(sigma),
                         unital_convertible(rho, sigma, tol),
                         unital_convertible(sigma, rho, tol),
                         rare_convertible(rho, sigma, tol),
                         rare_convertible(sigma, rho, tol),
                         noisy_convertible(rho, sigma, tol),
                         {}};
  auto half_half = [](const Spectrum& s) {
    return s.size() >= 2 && s[0] == 0.5 && s[1] == 0.5 && s.values().tail(s.size() - 2).cwiseAbs().sum() == 0;
  };
  if (!half_half(r.spectrum_rho)) r.failures.push_back("spectrum of rho is (1/2, 1/2)");
  if (!half_half(r.spectrum_sigma)) r.failures.push_back("spectrum of sigma is (1/2, 1/2)");
  if (r.unital_forward.answer != Answer::Yes) r.failures.push_back("unital rho -> sigma");
  if (r.unital_backward.answer != Answer::Yes) r.failures.push_back("unital sigma -> rho");
  if (r.mass_rho != std::pair<Real, Real>{1.0, 0.0}) r.failures.push_back("sector mass of rho is (1, 0)");
  if (r.mass_sigma != std::pair<Real, Real>{0.5, 0.5}) r.failures.push_back("sector mass of sigma is (1/2, 1/2)");
  if (r.rare_forward.answer != Answer::No) r.failures.push_back("no RaRe channel rho -> sigma");
  if (r.rare_backward.answer != Answer::No) r.failures.push_back("no RaRe channel sigma -> rho");
  return r;
}

}  // namespace microtherm
