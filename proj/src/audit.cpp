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

#include "microtherm/audit.hpp"

#include "microtherm/channels.hpp"
#include "microtherm/microcanonical.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace microtherm {

namespace {

// Unitary whose first column is v up to a phase.
ComplexMatrix completing_unitary(const ComplexVector& v) {
  const ComplexMatrix column = v;
  Eigen::HouseholderQR<ComplexMatrix> qr(column);
  return qr.householderQ() * ComplexMatrix::Identity(v.size(), v.size());
}

ComplexMatrix unitary_sending(const ComplexVector& a, const ComplexVector& b) {
  return completing_unitary(b) * completing_unitary(a).adjoint();
}

std::optional<int> vertex_index(const Eigen::Vector2d& p) {
  const auto& v = square_bit_vertices();
  for (size_t k = 0; k < v.size(); ++k)
    if ((v[k] - p).norm() < 1e-12) return static_cast<int>(k);
  return std::nullopt;
}

std::string vertex_name(int k) { return "a" + std::to_string(k + 1); }

std::string image_row(int g) {
  const auto& v = square_bit_vertices();
  const Eigen::Matrix2i& m = dihedral_elements()[static_cast<size_t>(g)];
  std::ostringstream os;
  os << "element " << g << " [" << m(0, 0) << ' ' << m(0, 1) << "; " << m(1, 0) << ' ' << m(1, 1) << "]:";
  for (size_t k = 0; k < v.size(); ++k)
    os << ' ' << vertex_name(static_cast<int>(k)) << "->" << vertex_name(*vertex_index(m.cast<Real>() * v[k]));
  return os.str();
}

// All perfectly distinguishable vertex pairs: any two distinct vertices.
std::vector<std::array<int, 2>> vertex_pairs() {
  return {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
}

}  // namespace

const char* check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Info: return "info";
  }
  return "?";
}

const AuditEntry* AuditReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string AuditReport::text_table() const {
  size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "check" << "  status  details\n";
  for (const auto& c : checks) {
    os << std::left << std::setw(static_cast<int>(width)) << c.name << "  " << std::setw(6) << check_status_name(c.status)
       << "  " << c.details << '\n';
    for (const auto& row : c.table) os << std::string(width + 10, ' ') << row << '\n';
  }
  return os.str();
}

std::optional<Reversible> connecting_reversible(const State& a, const State& b, const Tolerance& tol) {
  if (!(a.model() == b.model())) throw Error(Errc::ModelMismatch, "states of different systems");
  if (!is_pure(a, tol) || !is_pure(b, tol)) throw Error(Errc::NotPure, "transitivity is about pure states");
  const TheoryModel& model = a.model();
  std::optional<Reversible> found;
  switch (model.kind()) {
    case ModelKind::Classical: {
      Index i = 0, j = 0;
      a.probabilities().maxCoeff(&i);
      b.probabilities().maxCoeff(&j);
      std::vector<Index> image(static_cast<size_t>(model.d()));
      std::iota(image.begin(), image.end(), Index{0});
      std::swap(image[static_cast<size_t>(i)], image[static_cast<size_t>(j)]);
      found = Reversible(model, Permutation{std::move(image)});
      break;
    }
    case ModelKind::Quantum: found = Reversible(model, unitary_sending(pure_ket(a, tol), pure_ket(b, tol))); break;
    case ModelKind::DoubledQuantum: {
      const auto [s, va] = pure_sector_ket(a, tol);
      const auto [t, vb] = pure_sector_ket(b, tol);
      const ComplexMatrix w = unitary_sending(va, vb);
      const ComplexMatrix id = ComplexMatrix::Identity(model.d(), model.d());
      // The exchange moves the sector-s content to sector t before the sector unitary acts.
      found = Reversible(model, t == 0 ? DoubledUnitary{w, id, s != t} : DoubledUnitary{id, w, s != t});
      break;
    }
    case ModelKind::SquareBit:
    case ModelKind::HalfDisk:
      for (const auto& g : all_reversibles(model))
        if (distance_max(apply_reversible(g, a), b) <= tol.eq_tol) {
          found = g;
          break;
        }
      break;
  }
  if (found && distance_max(apply_reversible(*found, a), b) > tol.eq_tol) return std::nullopt;
  return found;
}

AuditEntry check_transitivity(const TheoryModel& model, int trials, std::uint64_t seed, const Tolerance& tol) {
  AuditEntry e;
  e.name = "transitivity[" + model.name() + "]";
  if (model.kind() == ModelKind::HalfDisk) {
    // The group is {identity, x -> -x}; arc points theta and pi - theta form the orbits.
    const State a = State::half_disk(std::cos(0.3), std::sin(0.3));
    const State b = State::half_disk(std::cos(0.4), std::sin(0.4));
    if (!connecting_reversible(a, b, tol)) {
      e.status = CheckStatus::Fail;
      e.details = "no reversible maps theta=0.3 to theta=0.4; orbits are {theta, pi - theta}";
      return e;
    }
    e.status = CheckStatus::Pass;
    e.details = "unexpected: witness pair connected";
    return e;
  }
  int connected = 0;
  for (int k = 0; k < trials; ++k) {
    const State a = random_pure_state(model, derive_seed(seed, static_cast<std::uint64_t>(2 * k)));
    const State b = random_pure_state(model, derive_seed(seed, static_cast<std::uint64_t>(2 * k + 1)));
    if (connecting_reversible(a, b, tol)) {
      ++connected;
    } else {
      e.status = CheckStatus::Fail;
      e.details = "pair " + std::to_string(k) + " has no connecting reversible";
      return e;
    }
  }
  if (model.kind() == ModelKind::SquareBit) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (!square_bit_element_mapping({i}, {j})) {
          e.status = CheckStatus::Fail;
          e.details = vertex_name(i) + " cannot reach " + vertex_name(j);
          return e;
        }
  }
  e.status = CheckStatus::Pass;
  e.details = std::to_string(connected) + " sampled pure pairs connected by explicit reversibles";
  return e;
}

std::optional<int> square_bit_element_mapping(const std::vector<int>& from, const std::vector<int>& to) {
  if (from.size() != to.size()) throw Error(Errc::LengthMismatch, "vertex lists differ in length");
  const auto& v = square_bit_vertices();
  for (int g = 0; g < 8; ++g) {
    const Eigen::Matrix2d m = dihedral_elements()[static_cast<size_t>(g)].cast<Real>();
    bool ok = true;
    for (size_t k = 0; k < from.size() && ok; ++k)
      ok = (m * v[static_cast<size_t>(from[k])] - v[static_cast<size_t>(to[k])]).norm() < 1e-12;
    if (ok) return g;
  }
  return std::nullopt;
}

AuditEntry check_permutability_square_bit() {
  AuditEntry e;
  e.name = "permutability[square-bit]";
  e.status = CheckStatus::Pass;
  int realized = 0;
  for (const auto& [i, j] : vertex_pairs()) {
    for (const auto& target : {std::vector<int>{i, j}, std::vector<int>{j, i}}) {
      const auto g = square_bit_element_mapping({i, j}, target);
      std::string row = "(" + vertex_name(i) + ", " + vertex_name(j) + ") -> (" + vertex_name(target[0]) + ", " +
                        vertex_name(target[1]) + "): ";
      if (g) {
        ++realized;
        row += "element " + std::to_string(*g);
      } else {
        e.status = CheckStatus::Fail;
        row += "none";
      }
      e.table.push_back(std::move(row));
    }
  }
  e.details = std::to_string(realized) + "/12 permutations of distinguishable vertex pairs realized";
  return e;
}

AuditEntry check_strong_symmetry_square_bit() {
  AuditEntry e;
  e.name = "strong-symmetry[square-bit]";
  for (int g = 0; g < 8; ++g) e.table.push_back(image_row(g));
  int missing = 0;
  for (const auto& [i, j] : vertex_pairs())
    for (const auto& [k, l] : vertex_pairs())
      for (const auto& target : {std::vector<int>{k, l}, std::vector<int>{l, k}})
        if (!square_bit_element_mapping({i, j}, target)) ++missing;
  const bool side_to_diagonal = square_bit_element_mapping({0, 1}, {0, 2}).has_value();
  e.status = missing == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  e.details = std::string(side_to_diagonal ? "an element maps" : "no element maps") +
              " (a1, a2) to (a1, a3); " + std::to_string(missing) + "/72 ordered maximal-set pairs unrealized";
  return e;
}

AuditEntry check_noisy_subset_unital(int samples, std::uint64_t seed) {
  AuditEntry e;
  e.name = "noisy-subset-unital[quantum]";
  std::mt19937_64 rng(seed);
  Tolerance tight;
  tight.eq_tol = 1e-10;
  int ok = 0;
  for (int k = 0; k < samples; ++k) {
    const Index d = 2 + static_cast<Index>(rng() % 2);
    const Index n = 1 + static_cast<Index>(rng() % 6);
    const Index terms = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    // n copies spread over `terms` unitaries, each used at least once.
    std::vector<Index> counts(static_cast<size_t>(terms), 1);
    for (Index r = terms; r < n; ++r) ++counts[rng() % static_cast<std::uint64_t>(terms)];
    const TheoryModel model = TheoryModel::quantum(d);
    MixtureOfReversibles mix;
    for (Index t = 0; t < terms; ++t)
      mix.terms.push_back({static_cast<Real>(counts[static_cast<size_t>(t)]) / static_cast<Real>(n),
                           Reversible(model, haar_random_unitary(d, rng()))});
    const NoisyRealization nr = noisy_realization(Channel(model, model, std::move(mix)));
    if (is_basic_noisy(nr, tight) && noisy_is_unital_check(nr, tight)) {
      ++ok;
    } else {
      e.status = CheckStatus::Fail;
      e.details = "realization " + std::to_string(k) + " does not fix chi";
      return e;
    }
  }
  e.status = CheckStatus::Pass;
  e.details = std::to_string(ok) + " realizations fix chi within 1e-10; ancillas prepared outside chi are not noisy "
                                   "operations and are excluded";
  return e;
}

AuditEntry check_half_disk_nonuniqueness() {
  AuditEntry e;
  e.name = "nonuniqueness[half-disk]";
  const InvariantDistributionReport r = invariant_distribution_report(TheoryModel::half_disk());
  bool all_invariant = true;
  for (const auto& m : r.witness_distributions) {
    std::ostringstream row;
    row << "measure {";
    for (size_t k = 0; k < m.atoms.size(); ++k)
      row << (k ? ", " : "") << "theta=" << m.atoms[k].first << ": " << m.atoms[k].second;
    const bool inv = is_reflection_invariant(m);
    all_invariant = all_invariant && inv;
    row << "} " << (inv ? "invariant" : "NOT invariant");
    e.table.push_back(row.str());
  }
  const bool distinct = r.witness_distributions.size() >= 2 &&
                        r.witness_distributions[0].atoms != r.witness_distributions[1].atoms;
  e.status = (!r.unique && all_invariant && distinct) ? CheckStatus::Pass : CheckStatus::Fail;
  e.details = std::to_string(r.witness_distributions.size()) +
              " distinct distributions invariant under {identity, reflection}; uniqueness flag " +
              (r.unique ? "true" : "false");
  return e;
}

AuditReport run_audit(int trials, std::uint64_t seed) {
  AuditReport r;
  for (const auto& model : {TheoryModel::classical(4), TheoryModel::quantum(3), TheoryModel::doubled_quantum(2),
                            TheoryModel::square_bit(), TheoryModel::half_disk()})
    r.checks.push_back(check_transitivity(model, trials, seed));
  r.checks.push_back(check_permutability_square_bit());
  r.checks.push_back(check_strong_symmetry_square_bit());
  r.checks.push_back(check_noisy_subset_unital(trials, seed));
  r.checks.push_back(check_half_disk_nonuniqueness());
  return r;
}

}  // namespace microtherm
