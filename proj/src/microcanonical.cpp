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

#include "microtherm/microcanonical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace microtherm {

namespace {

constexpr Real kPi = 3.14159265358979323846;

State group_average(const State& s, const std::vector<Reversible>& group) {
  std::vector<State> images;
  images.reserve(group.size());
  for (const auto& g : group) images.push_back(apply_reversible(g, s));
  const std::vector<Real> w(group.size(), 1.0 / static_cast<Real>(group.size()));
  return mixture(w, images);
}

bool finite_group(const TheoryModel& m) {
  return m.kind() == ModelKind::SquareBit || m.kind() == ModelKind::HalfDisk ||
         (m.kind() == ModelKind::Classical && m.d() <= 6);
}

}  // namespace

State microcanonical_state(const TheoryModel& model) {
  const Index d = model.d();
  switch (model.kind()) {
    case ModelKind::Classical:
      return State::unchecked(model, RealVector(RealVector::Constant(d, 1.0 / static_cast<Real>(d))));
    case ModelKind::Quantum:
      return State::unchecked(model, ComplexMatrix(ComplexMatrix::Identity(d, d) / static_cast<Real>(d)));
    case ModelKind::DoubledQuantum: {
      const ComplexMatrix half = ComplexMatrix::Identity(d, d) / static_cast<Real>(2 * d);
      return State::unchecked(model, SectorBlocks{half, half});
    }
    case ModelKind::SquareBit: return State::unchecked(model, Eigen::Vector2d(0, 0));
    case ModelKind::HalfDisk: break;
  }
  throw Error(Errc::NotMicrocanonical, "the half-disk has no unique invariant state");
}

State twirl(const State& s, const TwirlMode& mode) {
  const TheoryModel& model = s.model();
  if (const auto* mc = std::get_if<MonteCarloTwirl>(&mode)) {
    if (mc->samples < 1) throw Error(Errc::InvalidArgument, "twirl needs at least one sample");
    std::vector<State> images;
    images.reserve(static_cast<size_t>(mc->samples));
    for (int k = 0; k < mc->samples; ++k)
      images.push_back(apply_reversible(random_reversible(model, derive_seed(mc->seed, static_cast<std::uint64_t>(k))), s));
    const std::vector<Real> w(images.size(), 1.0 / static_cast<Real>(images.size()));
    return mixture(w, images);
  }
  switch (model.kind()) {
    case ModelKind::Classical:
      if (model.d() <= 7) return group_average(s, all_reversibles(model));
      return microcanonical_state(model);
    case ModelKind::Quantum: {
      const Complex tr = s.density().trace();
      return State::unchecked(model, ComplexMatrix(ComplexMatrix::Identity(model.d(), model.d()) * tr /
                                                   static_cast<Real>(model.d())));
    }
    case ModelKind::DoubledQuantum: {
      if (dimension(model) > 8)
        throw Error(Errc::Unsupported, "exact twirl of large doubled systems; use Monte-Carlo mode");
      const Complex total = s.blocks().block0.trace() + s.blocks().block1.trace();
      const ComplexMatrix half =
          ComplexMatrix::Identity(model.d(), model.d()) * total / static_cast<Real>(2 * model.d());
      return State::unchecked(model, SectorBlocks{half, half});
    }
    case ModelKind::SquareBit:
    case ModelKind::HalfDisk: return group_average(s, all_reversibles(model));
  }
  throw Error(Errc::Unsupported, "unknown model");
}

Real informational_equilibrium_defect(const TheoryModel& a, const TheoryModel& b) {
  const TheoryModel ab = compose_systems(a, b);
  const State product = tensor_states(microcanonical_state(a), microcanonical_state(b));
  return distance_max(product, microcanonical_state(ab));
}

bool check_informational_equilibrium(const TheoryModel& a, const TheoryModel& b, Real tol) {
  return informational_equilibrium_defect(a, b) <= tol;
}

bool is_reflection_invariant(const FiniteMeasure& measure, Real tol) {
  auto mass_at = [&](Real theta) {
    Real m = 0;
    for (const auto& [t, w] : measure.atoms)
      if (std::abs(t - theta) <= tol) m += w;
    return m;
  };
  for (const auto& [t, w] : measure.atoms)
    if (std::abs(mass_at(t) - mass_at(kPi - t)) > tol) return false;
  return true;
}

InvariantDistributionReport invariant_distribution_report(const TheoryModel& model) {
  InvariantDistributionReport report;
  switch (model.kind()) {
    case ModelKind::Classical:
    case ModelKind::Quantum:
    case ModelKind::DoubledQuantum:
      // Pure states form one orbit: permutations act transitively on point masses, unitaries
      // on rays, and sector unitaries together with the exchange on both sectors.
      report.orbit_count = 1;
      break;
    case ModelKind::SquareBit: {
      const auto& vertices = square_bit_vertices();
      std::vector<int> orbit_of(vertices.size(), -1);
      Index orbits = 0;
      for (size_t v = 0; v < vertices.size(); ++v) {
        if (orbit_of[v] >= 0) continue;
        for (const auto& g : dihedral_elements()) {
          const Eigen::Vector2d image = g.cast<Real>() * vertices[v];
          for (size_t w = 0; w < vertices.size(); ++w)
            if ((vertices[w] - image).norm() < 1e-12) orbit_of[w] = static_cast<int>(orbits);
        }
        ++orbits;
      }
      report.orbit_count = orbits;
      break;
    }
    case ModelKind::HalfDisk: {
      // Orbits of {id, reflection} on the arc are {theta, pi - theta}: infinitely many.
      report.orbit_count = std::nullopt;
      report.witness_distributions.push_back(FiniteMeasure{{{kPi / 2, 1.0}}});
      report.witness_distributions.push_back(FiniteMeasure{{{kPi / 4, 0.5}, {3 * kPi / 4, 0.5}}});
      break;
    }
  }
  report.unique = report.orbit_count.has_value() && *report.orbit_count == 1;
  return report;
}

bool check_minimally_resourceful(const State& s, const Tolerance& tol, int samples, std::uint64_t seed) {
  const TheoryModel& model = s.model();
  std::vector<Reversible> group;
  if (finite_group(model)) {
    group = all_reversibles(model);
  } else if (model.kind() == ModelKind::Classical) {
    // A transposition and the long cycle generate the symmetric group.
    std::vector<Index> swap01(static_cast<size_t>(model.d()));
    std::iota(swap01.begin(), swap01.end(), Index{0});
    std::swap(swap01[0], swap01[1]);
    std::vector<Index> cycle(static_cast<size_t>(model.d()));
    for (Index i = 0; i < model.d(); ++i) cycle[static_cast<size_t>(i)] = (i + 1) % model.d();
    group.emplace_back(model, Permutation{swap01});
    group.emplace_back(model, Permutation{cycle});
  } else {
    for (int k = 0; k < samples; ++k)
      group.push_back(random_reversible(model, derive_seed(seed, static_cast<std::uint64_t>(k))));
  }
  return std::all_of(group.begin(), group.end(),
                     [&](const Reversible& g) { return distance_max(apply_reversible(g, s), s) <= tol.eq_tol; });
}

}  // namespace microtherm
