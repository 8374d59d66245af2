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

#include <algorithm>
#include <cmath>
#include <numeric>

namespace microtherm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_model(const TheoryModel& expected, const TheoryModel& got, const char* what) {
  if (!(expected == got))
    throw Error(Errc::ModelMismatch, std::string(what) + ": expected " + expected.name() + ", got " + got.name());
}

// Largest magnitude of the off-diagonal sector blocks of a full 2d x 2d operator.
Real cross_sector_magnitude(const ComplexMatrix& full, Index d) {
  return std::max(full.topRightCorner(d, d).cwiseAbs().maxCoeff(), full.bottomLeftCorner(d, d).cwiseAbs().maxCoeff());
}

}  // namespace

Channel::Channel(TheoryModel input, TheoryModel output, ChannelRepresentation representation, const Tolerance& tol)
    : input_(std::move(input)), output_(std::move(output)), representation_(std::move(representation)) {
  std::visit(
      overloaded{
          [&](const MixtureOfReversibles& m) {
            if (!(input_ == output_)) throw Error(Errc::ModelMismatch, "reversible mixtures keep the system");
            if (m.terms.empty()) throw Error(Errc::InvalidArgument, "empty mixture");
            Real total = 0;
            for (const auto& t : m.terms) {
              require_model(input_, t.reversible.model(), "mixture term");
              if (t.weight < -tol.eq_tol) throw Error(Errc::InvalidArgument, "negative mixture weight");
              total += t.weight;
            }
            if (std::abs(total - 1) > tol.eq_tol) throw Error(Errc::NotNormalized, "mixture weights do not sum to 1");
          },
          [&](const MeasureAndPrepare& m) {
            if (m.effects.size() != m.states.size() || m.effects.empty())
              throw Error(Errc::InvalidArgument, "measure-and-prepare needs matching effects and states");
            for (const auto& e : m.effects) require_model(input_, e.model(), "measured effect");
            for (const auto& s : m.states) require_model(output_, s.model(), "prepared state");
          },
          [&](const OperatorSum& k) {
            if (!(input_ == output_)) throw Error(Errc::ModelMismatch, "operator sums keep the system");
            if (input_.kind() != ModelKind::Quantum && input_.kind() != ModelKind::DoubledQuantum)
              throw Error(Errc::UnsupportedModel, "operator sums need a Hilbert-space model");
            if (k.kraus.empty()) throw Error(Errc::InvalidArgument, "no Kraus operators");
            const Index n = input_.kind() == ModelKind::Quantum ? input_.d() : 2 * input_.d();
            ComplexMatrix sum = ComplexMatrix::Zero(n, n);
            for (const auto& op : k.kraus) {
              if (op.rows() != n || op.cols() != n) throw Error(Errc::DimensionMismatch, "Kraus operator size");
              sum += op.adjoint() * op;
            }
            if (max_abs_diff(sum, ComplexMatrix::Identity(n, n)) > tol.eq_tol)
              throw Error(Errc::InvalidArgument, "Kraus operators are not trace preserving");
          },
          [&](const DoublyStochasticInduced& m) {
            const Index d = m.matrix.dim();
            if (m.basis_in.size() != d || m.basis_out.size() != d)
              throw Error(Errc::DimensionMismatch, "basis sizes must match the matrix");
            for (const auto& s : m.basis_in.states) require_model(input_, s.model(), "input basis");
            for (const auto& s : m.basis_out.states) require_model(output_, s.model(), "output basis");
          },
      },
      representation_);
}

Channel Channel::identity(const TheoryModel& model) {
  ReversiblePayload payload;
  switch (model.kind()) {
    case ModelKind::Classical: {
      std::vector<Index> image(static_cast<size_t>(model.d()));
      std::iota(image.begin(), image.end(), Index{0});
      payload = Permutation{std::move(image)};
      break;
    }
    case ModelKind::Quantum: payload = ComplexMatrix(ComplexMatrix::Identity(model.d(), model.d())); break;
    case ModelKind::DoubledQuantum:
      payload = DoubledUnitary{ComplexMatrix::Identity(model.d(), model.d()),
                               ComplexMatrix::Identity(model.d(), model.d()), false};
      break;
    default: payload = GroupElement{0}; break;
  }
  return reversible(Reversible(model, std::move(payload)));
}

Channel Channel::reversible(const Reversible& u) {
  return Channel(u.model(), u.model(), MixtureOfReversibles{{ReversibleTerm{1.0, u}}});
}

State apply_channel(const Channel& c, const State& s) {
  require_model(c.input(), s.model(), "apply_channel");
  return std::visit(
      overloaded{
          [&](const MixtureOfReversibles& m) {
            std::vector<Real> w;
            std::vector<State> images;
            for (const auto& t : m.terms) {
              w.push_back(t.weight);
              images.push_back(apply_reversible(t.reversible, s));
            }
            return mixture(w, images);
          },
          [&](const MeasureAndPrepare& m) {
            std::vector<Real> w;
            for (const auto& e : m.effects) w.push_back(pair(e, s));
            return mixture(w, m.states);
          },
          [&](const OperatorSum& k) {
            if (s.model().kind() == ModelKind::Quantum) {
              ComplexMatrix out = ComplexMatrix::Zero(s.model().d(), s.model().d());
              for (const auto& op : k.kraus) out += op * s.density() * op.adjoint();
              return State::unchecked(c.output(), std::move(out));
            }
            const Index d = s.model().d();
            const ComplexMatrix full = direct_sum(s.blocks());
            ComplexMatrix out = ComplexMatrix::Zero(2 * d, 2 * d);
            for (const auto& op : k.kraus) out += op * full * op.adjoint();
            if (cross_sector_magnitude(out, d) > Tolerance{}.eq_tol)
              throw Error(Errc::InvalidArgument, "operator sum creates cross-sector coherence");
            return State::unchecked(c.output(), SectorBlocks{out.topLeftCorner(d, d), out.bottomRightCorner(d, d)});
          },
          [&](const DoublyStochasticInduced& m) {
            const RealMatrix& dm = m.matrix.matrix();
            const Index n = dm.rows();
            RealVector outcome(n);
            for (Index j = 0; j < n; ++j) outcome(j) = pair(m.basis_in.dagger_effects[static_cast<size_t>(j)], s);
            const RealVector weights = dm * outcome;
            return mixture(std::span<const Real>(weights.data(), static_cast<size_t>(n)), m.basis_out.states);
          },
      },
      c.representation());
}

Real unitality_defect(const Channel& c) {
  return distance_max(apply_channel(c, microcanonical_state(c.input())), microcanonical_state(c.output()));
}

bool is_unital(const Channel& c, Real tol) { return unitality_defect(c) <= tol; }

Channel unital_from_doubly_stochastic(const TheoryModel& model, const DoublyStochasticMatrix& d,
                                      const PureMaximalSet& basis_in, const PureMaximalSet& basis_out) {
  if (basis_in.size() != d.dim() || basis_out.size() != d.dim())
    throw Error(Errc::DimensionMismatch, "bases must have one state per matrix row");
  return Channel(model, model, DoublyStochasticInduced{d, basis_in, basis_out});
}

ExtractedMatrix doubly_stochastic_from_channel(const Channel& c, const PureMaximalSet& basis_in,
                                               const PureMaximalSet& basis_out, const Tolerance& tol) {
  if (basis_in.size() != basis_out.size()) throw Error(Errc::DimensionMismatch, "basis sizes differ");
  const Index n = basis_in.size();
  ExtractedMatrix out;
  out.matrix.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    const State image = apply_channel(c, basis_in.states[static_cast<size_t>(j)]);
    for (Index i = 0; i < n; ++i) out.matrix(i, j) = pair(basis_out.dagger_effects[static_cast<size_t>(i)], image, tol);
  }
  out.doubly_stochastic = is_doubly_stochastic(out.matrix, tol);
  return out;
}

Reversible basis_permutation_reversible(const TheoryModel& model, const PureMaximalSet& basis_in,
                                        const PureMaximalSet& basis_out, const PermutationImage& image) {
  const auto n = static_cast<size_t>(basis_in.size());
  if (basis_out.states.size() != n || image.size() != n)
    throw Error(Errc::DimensionMismatch, "basis and permutation sizes differ");
  switch (model.kind()) {
    case ModelKind::Classical: {
      auto point = [](const State& s) {
        Index arg = 0;
        s.probabilities().maxCoeff(&arg);
        return arg;
      };
      std::vector<Index> perm(n);
      for (size_t j = 0; j < n; ++j)
        perm[static_cast<size_t>(point(basis_in.states[j]))] = point(basis_out.states[static_cast<size_t>(image[j])]);
      return Reversible(model, Permutation{std::move(perm)});
    }
    case ModelKind::Quantum: {
      ComplexMatrix u = ComplexMatrix::Zero(model.d(), model.d());
      for (size_t j = 0; j < n; ++j)
        u += pure_ket(basis_out.states[static_cast<size_t>(image[j])]) * pure_ket(basis_in.states[j]).adjoint();
      return Reversible(model, std::move(u));
    }
    case ModelKind::DoubledQuantum: {
      const Index d = model.d();
      std::array<ComplexMatrix, 2> u{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
      int exchange = -1;
      for (size_t j = 0; j < n; ++j) {
        const auto [s_in, a] = pure_sector_ket(basis_in.states[j]);
        const auto [s_out, b] = pure_sector_ket(basis_out.states[static_cast<size_t>(image[j])]);
        const int flips = s_in != s_out ? 1 : 0;
        if (exchange >= 0 && flips != exchange)
          throw Error(Errc::UnsupportedModel,
                      "permutation mixes sector-preserving and sector-exchanging assignments; no doubled-quantum "
                      "reversible realizes it");
        exchange = flips;
        u[static_cast<size_t>(s_out)] += b * a.adjoint();
      }
      if (!is_unitary(u[0], 1e-9) || !is_unitary(u[1], 1e-9))
        throw Error(Errc::UnsupportedModel, "sector assignment does not give sector unitaries");
      return Reversible(model, DoubledUnitary{u[0], u[1], exchange == 1});
    }
    default: break;
  }
  throw Error(Errc::UnsupportedModel, model.name() + " lacks basis-permuting reversibles (no Strong Symmetry)");
}

Channel rare_from_birkhoff(const TheoryModel& model, const PureMaximalSet& basis_in, const PureMaximalSet& basis_out,
                           const DoublyStochasticMatrix& d, const Tolerance& tol) {
  if (model.kind() == ModelKind::SquareBit || model.kind() == ModelKind::HalfDisk)
    throw Error(Errc::UnsupportedModel, model.name() + " lacks basis-permuting reversibles (no Strong Symmetry)");
  if (basis_in.size() != d.dim() || basis_out.size() != d.dim())
    throw Error(Errc::DimensionMismatch, "bases must have one state per matrix row");
  const BirkhoffDecomposition bd = birkhoff_decompose(d, tol);
  MixtureOfReversibles mix;
  for (const auto& term : bd.terms)
    mix.terms.push_back({term.weight, basis_permutation_reversible(model, basis_in, basis_out, term.permutation)});
  return Channel(model, model, std::move(mix), tol);
}

namespace {

// Best rational approximation with denominator <= max_den via continued fractions.
std::pair<Index, Index> best_rational(Real x, Index max_den) {
  Index h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  Real r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const auto a = static_cast<Index>(std::floor(r));
    const Index h2 = a * h1 + h0;
    const Index k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const Real frac = r - static_cast<Real>(a);
    if (frac < 1e-13) break;
    r = 1 / frac;
  }
  return {h1, k1};
}

}  // namespace

RationalWeights rationalize_weights(std::span<const Real> weights, Index max_denominator) {
  if (weights.empty()) throw Error(Errc::InvalidArgument, "no weights");
  RationalWeights out;
  Index lcm = 1;
  std::vector<std::pair<Index, Index>> fracs;
  for (Real w : weights) {
    const auto f = best_rational(w, max_denominator);
    fracs.push_back(f);
    lcm = std::lcm(lcm, f.second);
    if (lcm > max_denominator) break;
  }
  Index total = 0;
  if (lcm <= max_denominator) {
    for (const auto& [num, den] : fracs) {
      out.numerators.push_back(num * (lcm / den));
      total += out.numerators.back();
    }
  }
  if (lcm > max_denominator || total != lcm) {
    // Largest-remainder rounding on the maximal grid.
    lcm = max_denominator;
    out.numerators.assign(weights.size(), 0);
    std::vector<std::pair<Real, size_t>> remainders;
    total = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
      const Real scaled = weights[i] * static_cast<Real>(lcm);
      out.numerators[i] = static_cast<Index>(std::floor(scaled));
      total += out.numerators[i];
      remainders.emplace_back(scaled - std::floor(scaled), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t k = 0; total < lcm && k < remainders.size(); ++k, ++total) ++out.numerators[remainders[k].second];
  }
  out.denominator = lcm;
  for (size_t i = 0; i < weights.size(); ++i)
    out.max_error = std::max(out.max_error, std::abs(weights[i] - static_cast<Real>(out.numerators[i]) / static_cast<Real>(lcm)));
  return out;
}

std::pair<Channel, Real> rationalize_channel(const Channel& rare, Index max_denominator) {
  const auto* mix = std::get_if<MixtureOfReversibles>(&rare.representation());
  if (!mix) throw Error(Errc::InvalidArgument, "rationalization needs a mixture of reversibles");
  std::vector<Real> w;
  for (const auto& t : mix->terms) w.push_back(t.weight);
  const RationalWeights r = rationalize_weights(w, max_denominator);
  MixtureOfReversibles out;
  for (size_t i = 0; i < mix->terms.size(); ++i) {
    if (r.numerators[i] == 0) continue;
    out.terms.push_back({static_cast<Real>(r.numerators[i]) / static_cast<Real>(r.denominator), mix->terms[i].reversible});
  }
  return {Channel(rare.input(), rare.output(), std::move(out)), r.max_error};
}

State NoisyRealization::ancilla_state() const {
  return prepared_ancilla ? *prepared_ancilla : microcanonical_state(ancilla_model);
}

Effect NoisyRealization::discarded_effect() const { return deterministic_effect(ancilla_model); }

const ComplexMatrix& NoisyRealization::controlled_unitary(Index k) const {
  for (const auto& g : controls) {
    if (k < g.multiplicity) return g.unitary;
    k -= g.multiplicity;
  }
  throw Error(Errc::InvalidArgument, "control level out of range");
}

Reversible NoisyRealization::global_reversible() const {
  const Index d = system.d();
  const Index n = ancilla_model.d();
  ComplexMatrix u = ComplexMatrix::Zero(d * n, d * n);
  for (Index k = 0; k < n; ++k) {
    const ComplexMatrix& v = controlled_unitary(k);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) u(i * n + k, j * n + k) = v(i, j);
  }
  return Reversible(TheoryModel::quantum(d * n), std::move(u));
}

NoisyRealization noisy_realization(const Channel& rare, const Tolerance& /*tol*/) {
  const auto* mix = std::get_if<MixtureOfReversibles>(&rare.representation());
  if (!mix) throw Error(Errc::InvalidArgument, "noisy realization needs a mixture of reversibles");
  if (rare.input().kind() != ModelKind::Quantum)
    throw Error(Errc::UnsupportedModel, "control-unitary realization is implemented for quantum systems");
  std::vector<Real> w;
  for (const auto& t : mix->terms) w.push_back(t.weight);
  const RationalWeights r = rationalize_weights(w);
  if (r.max_error > 1e-12)
    throw Error(Errc::IrrationalWeights, "weights are not rational with denominator <= 10^4; rationalize first");
  std::vector<ControlGroup> controls;
  for (size_t i = 0; i < mix->terms.size(); ++i)
    if (r.numerators[i] > 0)
      controls.push_back({r.numerators[i], std::get<ComplexMatrix>(mix->terms[i].reversible.payload())});
  return NoisyRealization{rare.input(), TheoryModel::quantum(r.denominator), std::move(controls), std::nullopt};
}

State apply_noisy_realization(const NoisyRealization& nr, const State& s) {
  require_model(nr.system, s.model(), "noisy realization input");
  const Index d = nr.system.d();
  const Index n = nr.ancilla_model.d();
  if (d * n <= 64) {
    const ComplexMatrix global = std::get<ComplexMatrix>(nr.global_reversible().payload());
    const ComplexMatrix joint = global * kron(s.density(), nr.ancilla_state().density()) * global.adjoint();
    return State::unchecked(nr.system, partial_trace_second(joint, d, n));
  }
  // Discarding the ancilla removes the k != l coherences of the control register.
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  Index k = 0;
  for (const auto& g : nr.controls) {
    Real weight = 0;
    for (Index c = 0; c < g.multiplicity; ++c, ++k)
      weight += nr.prepared_ancilla ? nr.prepared_ancilla->density()(k, k).real() : 1 / static_cast<Real>(n);
    out += weight * g.unitary * s.density() * g.unitary.adjoint();
  }
  return State::unchecked(nr.system, std::move(out));
}

bool is_basic_noisy(const NoisyRealization& nr, const Tolerance& tol) {
  Index levels = 0;
  for (const auto& g : nr.controls) {
    if (g.multiplicity <= 0 || g.unitary.rows() != nr.system.d()) return false;
    if (max_abs_diff(g.unitary * g.unitary.adjoint(), ComplexMatrix::Identity(nr.system.d(), nr.system.d())) >
        tol.eq_tol)
      return false;
    levels += g.multiplicity;
  }
  if (levels != nr.ancilla_model.d()) return false;
  return !nr.prepared_ancilla || distance_max(*nr.prepared_ancilla, microcanonical_state(nr.ancilla_model)) <= tol.eq_tol;
}

bool noisy_is_unital_check(const NoisyRealization& nr, const Tolerance& tol) {
  const State chi = microcanonical_state(nr.system);
  return distance_max(apply_noisy_realization(nr, chi), chi) <= tol.eq_tol;
}

std::array<ComplexMatrix, 3> spin_operators(Real j) {
  const Real twice = 2 * j;
  if (twice < 1 || std::abs(twice - std::round(twice)) > 1e-12)
    throw Error(Errc::InvalidArgument, "spin must be a positive half-integer");
  const auto n = static_cast<Index>(std::lround(twice)) + 1;
  ComplexMatrix jz = ComplexMatrix::Zero(n, n);
  ComplexMatrix jp = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const Real m = j - static_cast<Real>(k);
    jz(k, k) = m;
    // J+ |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>, and |j, m+1> sits at row k-1.
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const ComplexMatrix jm = jp.adjoint();
  const ComplexMatrix jx = (jp + jm) / 2.0;
  const ComplexMatrix jy = (jp - jm) / Complex(0.0, 2.0);
  return {jx, jy, jz};
}

Channel landau_streater(Real j) {
  const auto ops = spin_operators(j);
  const Real scale = 1 / std::sqrt(j * (j + 1));
  OperatorSum k;
  for (const auto& op : ops) k.kraus.push_back(op * scale);
  const TheoryModel model = TheoryModel::quantum(ops[0].rows());
  return Channel(model, model, std::move(k));
}

std::vector<State> spanning_states(const TheoryModel& model, std::uint64_t seed) {
  std::vector<State> out;
  if (model.kind() != ModelKind::HalfDisk) {
    const PureMaximalSet basis = standard_maximal_set(model);
    out.insert(out.end(), basis.states.begin(), basis.states.end());
    out.push_back(microcanonical_state(model));
  }
  for (std::uint64_t k = 0; k < 20; ++k) out.push_back(random_state(model, derive_seed(seed, k)));
  return out;
}

Real trace_preservation_defect(const Channel& c, std::uint64_t seed) {
  Real worst = 0;
  for (const auto& s : spanning_states(c.input(), seed)) worst = std::max(worst, std::abs(total_weight(apply_channel(c, s)) - 1));
  return worst;
}

}  // namespace microtherm
