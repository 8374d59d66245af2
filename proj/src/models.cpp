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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace microtherm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr Real kPi = 3.14159265358979323846;

bool is_geometric(ModelKind k) { return k == ModelKind::SquareBit || k == ModelKind::HalfDisk; }

void require_same_model(const TheoryModel& a, const TheoryModel& b, const char* what) {
  if (!(a == b)) throw Error(Errc::ModelMismatch, std::string(what) + ": " + a.name() + " vs " + b.name());
}

Real min_eigenvalue(const ComplexMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Real max_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

void check_square(const ComplexMatrix& m, Index d, const char* what) {
  if (m.rows() != d || m.cols() != d)
    throw Error(Errc::DimensionMismatch, std::string(what) + " must be " + std::to_string(d) + "x" + std::to_string(d));
  if (!m.allFinite()) throw Error(Errc::InvalidState, std::string(what) + " has non-finite entries");
}

void validate_positive_block(const ComplexMatrix& m, Index d, const Tolerance& tol, const char* what) {
  check_square(m, d, what);
  if (hermiticity_defect(m) > tol.eq_tol) throw Error(Errc::InvalidState, std::string(what) + " is not Hermitian");
  if (min_eigenvalue(m) < -tol.psd_tol) throw Error(Errc::InvalidState, std::string(what) + " is not positive");
}

void validate_effect_block(const ComplexMatrix& m, Index d, const Tolerance& tol, const char* what) {
  validate_positive_block(m, d, tol, what);
  if (max_eigenvalue(m) > 1 + tol.psd_tol) throw Error(Errc::InvalidArgument, std::string(what) + " exceeds identity");
}

Real real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexVector normalize_phase(ComplexVector v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const Real mag = std::abs(v(arg));
  if (mag > 0) v *= std::conj(v(arg)) / mag;
  return v;
}

SectorBlocks zero_blocks(Index d) { return {ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)}; }

// Pulls the two composite sector blocks out of a full factor-product operator.
SectorBlocks extract_composite_blocks(const ComplexMatrix& full, Index da, Index db) {
  SectorBlocks out;
  for (int s = 0; s < 2; ++s) {
    const auto idx = doubled_composite_sector_indices(da, db, s);
    const auto n = static_cast<Index>(idx.size());
    ComplexMatrix block(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) block(r, c) = full(idx[static_cast<size_t>(r)], idx[static_cast<size_t>(c)]);
    (s == 0 ? out.block0 : out.block1) = std::move(block);
  }
  return out;
}

ComplexMatrix embed_composite_blocks(const SectorBlocks& blocks, Index da, Index db) {
  const Index n = 4 * da * db;
  ComplexMatrix full = ComplexMatrix::Zero(n, n);
  for (int s = 0; s < 2; ++s) {
    const auto idx = doubled_composite_sector_indices(da, db, s);
    const ComplexMatrix& block = s == 0 ? blocks.block0 : blocks.block1;
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t c = 0; c < idx.size(); ++c) full(idx[r], idx[c]) = block(static_cast<Index>(r), static_cast<Index>(c));
  }
  return full;
}

SectorBlocks split_direct_sum(const ComplexMatrix& full, Index d) {
  return {full.topLeftCorner(d, d), full.bottomRightCorner(d, d)};
}

}  // namespace

// ---------------------------------------------------------------------------
// TheoryModel

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Classical: return "classical";
    case ModelKind::Quantum: return "quantum";
    case ModelKind::DoubledQuantum: return "doubled-quantum";
    case ModelKind::SquareBit: return "square-bit";
    case ModelKind::HalfDisk: return "half-disk";
  }
  return "unknown";
}

TheoryModel TheoryModel::classical(Index d) {
  if (d < 1) throw Error(Errc::InvalidArgument, "dimension must be positive");
  return {ModelKind::Classical, d};
}

TheoryModel TheoryModel::quantum(Index d) {
  if (d < 1) throw Error(Errc::InvalidArgument, "dimension must be positive");
  return {ModelKind::Quantum, d};
}

TheoryModel TheoryModel::doubled_quantum(Index sector_dim) {
  if (sector_dim < 1) throw Error(Errc::InvalidArgument, "sector dimension must be positive");
  return {ModelKind::DoubledQuantum, sector_dim};
}

TheoryModel TheoryModel::square_bit() { return {ModelKind::SquareBit, 2}; }
TheoryModel TheoryModel::half_disk() { return {ModelKind::HalfDisk, 2}; }

const TheoryModel& TheoryModel::factor(Factor which) const {
  if (!is_composite()) throw Error(Errc::NotComposite, name() + " is not a composite system");
  return which == Factor::A ? *factor_a_ : *factor_b_;
}

std::string TheoryModel::name() const {
  std::string out = model_kind_name(kind_);
  if (!is_geometric(kind_)) out += "(" + std::to_string(d_) + ")";
  if (is_composite()) out += "[" + factor_a_->name() + " x " + factor_b_->name() + "]";
  return out;
}

Index dimension(const TheoryModel& model) {
  switch (model.kind()) {
    case ModelKind::Classical:
    case ModelKind::Quantum: return model.d();
    case ModelKind::DoubledQuantum: return 2 * model.d();
    case ModelKind::SquareBit:
    case ModelKind::HalfDisk: return 2;
  }
  return 0;
}

TheoryModel compose_systems(const TheoryModel& a, const TheoryModel& b) {
  if (a.kind() != b.kind() || is_geometric(a.kind()))
    throw Error(Errc::UnsupportedComposition, "cannot compose " + a.name() + " with " + b.name());
  TheoryModel out = a.kind() == ModelKind::DoubledQuantum ? TheoryModel(a.kind(), 2 * a.d() * b.d())
                                                          : TheoryModel(a.kind(), a.d() * b.d());
  out.factor_a_ = std::make_shared<const TheoryModel>(a);
  out.factor_b_ = std::make_shared<const TheoryModel>(b);
  return out;
}

std::vector<Index> doubled_composite_sector_indices(Index da, Index db, int sector) {
  auto full = [&](int sa, Index i, int sb, Index j) { return (sa * da + i) * (2 * db) + (sb * db + j); };
  std::vector<Index> out;
  out.reserve(static_cast<size_t>(2 * da * db));
  const int first_b = sector == 0 ? 0 : 1;
  for (int sa = 0; sa < 2; ++sa) {
    const int sb = sa == 0 ? first_b : 1 - first_b;
    for (Index i = 0; i < da; ++i)
      for (Index j = 0; j < db; ++j) out.push_back(full(sa, i, sb, j));
  }
  return out;
}

ComplexMatrix direct_sum(const SectorBlocks& blocks) {
  const Index d = blocks.block0.rows();
  ComplexMatrix full = ComplexMatrix::Zero(2 * d, 2 * d);
  full.topLeftCorner(d, d) = blocks.block0;
  full.bottomRightCorner(d, d) = blocks.block1;
  return full;
}

// ---------------------------------------------------------------------------
// State

State::State(TheoryModel model, StatePayload payload, const Tolerance& tol)
    : model_(std::move(model)), payload_(std::move(payload)) {
  const Index d = model_.d();
  switch (model_.kind()) {
    case ModelKind::Classical: {
      const auto* p = std::get_if<RealVector>(&payload_);
      if (!p) throw Error(Errc::ModelMismatch, "classical state needs a probability vector");
      if (p->size() != d) throw Error(Errc::DimensionMismatch, "probability vector length != d");
      if (!p->allFinite() || p->minCoeff() < -tol.eq_tol) throw Error(Errc::InvalidState, "negative probability");
      if (std::abs(p->sum() - 1) > tol.eq_tol) throw Error(Errc::NotNormalized, "probabilities do not sum to 1");
      break;
    }
    case ModelKind::Quantum: {
      const auto* rho = std::get_if<ComplexMatrix>(&payload_);
      if (!rho) throw Error(Errc::ModelMismatch, "quantum state needs a density matrix");
      validate_positive_block(*rho, d, tol, "density matrix");
      if (std::abs(rho->trace() - Complex(1.0, 0.0)) > tol.eq_tol)
        throw Error(Errc::NotNormalized, "density matrix trace != 1");
      break;
    }
    case ModelKind::DoubledQuantum: {
      const auto* b = std::get_if<SectorBlocks>(&payload_);
      if (!b) throw Error(Errc::ModelMismatch, "doubled-quantum state needs sector blocks");
      validate_positive_block(b->block0, d, tol, "sector-0 block");
      validate_positive_block(b->block1, d, tol, "sector-1 block");
      if (std::abs(b->block0.trace() + b->block1.trace() - Complex(1.0, 0.0)) > tol.eq_tol)
        throw Error(Errc::NotNormalized, "sector traces do not sum to 1");
      break;
    }
    case ModelKind::SquareBit: {
      const auto* xy = std::get_if<Eigen::Vector2d>(&payload_);
      if (!xy) throw Error(Errc::ModelMismatch, "square-bit state needs a point");
      if (!xy->allFinite() || xy->cwiseAbs().maxCoeff() > 1 + tol.eq_tol)
        throw Error(Errc::InvalidState, "point outside the square");
      break;
    }
    case ModelKind::HalfDisk: {
      const auto* xy = std::get_if<Eigen::Vector2d>(&payload_);
      if (!xy) throw Error(Errc::ModelMismatch, "half-disk state needs a point");
      if (!xy->allFinite() || xy->squaredNorm() > 1 + tol.eq_tol || (*xy)(1) < -tol.eq_tol)
        throw Error(Errc::InvalidState, "point outside the half-disk");
      break;
    }
  }
}

State State::classical(RealVector probabilities) {
  auto model = TheoryModel::classical(probabilities.size());
  return State(std::move(model), std::move(probabilities));
}

State State::quantum(ComplexMatrix density) {
  auto model = TheoryModel::quantum(density.rows());
  return State(std::move(model), std::move(density));
}

State State::doubled_quantum(ComplexMatrix block0, ComplexMatrix block1) {
  auto model = TheoryModel::doubled_quantum(block0.rows());
  return State(std::move(model), SectorBlocks{std::move(block0), std::move(block1)});
}

State State::square_bit(Real x, Real y) { return State(TheoryModel::square_bit(), Eigen::Vector2d(x, y)); }
State State::half_disk(Real x, Real y) { return State(TheoryModel::half_disk(), Eigen::Vector2d(x, y)); }

State State::unchecked(TheoryModel model, StatePayload payload) {
  return State(std::move(model), std::move(payload), nullptr);
}

const RealVector& State::probabilities() const {
  if (const auto* p = std::get_if<RealVector>(&payload_)) return *p;
  throw Error(Errc::ModelMismatch, model_.name() + " state has no probability vector");
}

const ComplexMatrix& State::density() const {
  if (const auto* p = std::get_if<ComplexMatrix>(&payload_)) return *p;
  throw Error(Errc::ModelMismatch, model_.name() + " state has no density matrix");
}

const SectorBlocks& State::blocks() const {
  if (const auto* p = std::get_if<SectorBlocks>(&payload_)) return *p;
  throw Error(Errc::ModelMismatch, model_.name() + " state has no sector blocks");
}

const Eigen::Vector2d& State::point() const {
  if (const auto* p = std::get_if<Eigen::Vector2d>(&payload_)) return *p;
  throw Error(Errc::ModelMismatch, model_.name() + " state has no planar point");
}

// ---------------------------------------------------------------------------
// Effect

Effect::Effect(TheoryModel model, EffectPayload payload) : model_(std::move(model)), payload_(std::move(payload)) {
  const Tolerance tol;
  const Index d = model_.d();
  switch (model_.kind()) {
    case ModelKind::Classical: {
      const auto* e = std::get_if<RealVector>(&payload_);
      if (!e || e->size() != d) throw Error(Errc::ModelMismatch, "classical effect needs a length-d vector");
      if (e->minCoeff() < -tol.eq_tol || e->maxCoeff() > 1 + tol.eq_tol)
        throw Error(Errc::InvalidArgument, "classical effect outside [0,1]");
      break;
    }
    case ModelKind::Quantum: {
      const auto* e = std::get_if<ComplexMatrix>(&payload_);
      if (!e) throw Error(Errc::ModelMismatch, "quantum effect needs an operator");
      validate_effect_block(*e, d, tol, "effect");
      break;
    }
    case ModelKind::DoubledQuantum: {
      const auto* e = std::get_if<SectorBlocks>(&payload_);
      if (!e) throw Error(Errc::ModelMismatch, "doubled-quantum effect needs sector blocks");
      validate_effect_block(e->block0, d, tol, "sector-0 effect");
      validate_effect_block(e->block1, d, tol, "sector-1 effect");
      break;
    }
    case ModelKind::SquareBit: {
      const auto* e = std::get_if<Eigen::Vector3d>(&payload_);
      if (!e) throw Error(Errc::ModelMismatch, "square-bit effect needs an affine functional");
      for (const auto& v : square_bit_vertices()) {
        const Real val = (*e)(0) * v(0) + (*e)(1) * v(1) + (*e)(2);
        if (val < -tol.eq_tol || val > 1 + tol.eq_tol) throw Error(Errc::InvalidArgument, "effect outside [0,1]");
      }
      break;
    }
    case ModelKind::HalfDisk: {
      const auto* e = std::get_if<Eigen::Vector3d>(&payload_);
      if (!e) throw Error(Errc::ModelMismatch, "half-disk effect needs an affine functional");
      // Extremes of a linear function over the half-disk sit on the arc.
      std::vector<Real> angles{0.0, kPi};
      const Real crit = std::atan2((*e)(1), (*e)(0));
      for (Real a : {crit, crit + kPi, crit - kPi})
        if (a >= 0 && a <= kPi) angles.push_back(a);
      for (Real a : angles) {
        const Real val = (*e)(0) * std::cos(a) + (*e)(1) * std::sin(a) + (*e)(2);
        if (val < -tol.eq_tol || val > 1 + tol.eq_tol) throw Error(Errc::InvalidArgument, "effect outside [0,1]");
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Reversible

const std::array<Eigen::Matrix2i, 8>& dihedral_elements() {
  static const std::array<Eigen::Matrix2i, 8> elements = [] {
    std::array<Eigen::Matrix2i, 8> e;
    e[0] << 1, 0, 0, 1;
    e[1] << 0, -1, 1, 0;
    e[2] << -1, 0, 0, -1;
    e[3] << 0, 1, -1, 0;
    e[4] << 1, 0, 0, -1;
    e[5] << -1, 0, 0, 1;
    e[6] << 0, 1, 1, 0;
    e[7] << 0, -1, -1, 0;
    return e;
  }();
  return elements;
}

const std::array<Eigen::Vector2d, 4>& square_bit_vertices() {
  static const std::array<Eigen::Vector2d, 4> v{Eigen::Vector2d(-1, 1), Eigen::Vector2d(-1, -1),
                                                Eigen::Vector2d(1, -1), Eigen::Vector2d(1, 1)};
  return v;
}

Reversible::Reversible(TheoryModel model, ReversiblePayload payload, const Tolerance& tol)
    : model_(std::move(model)), payload_(std::move(payload)) {
  const Index d = model_.d();
  switch (model_.kind()) {
    case ModelKind::Classical: {
      const auto* p = std::get_if<Permutation>(&payload_);
      if (!p || static_cast<Index>(p->image.size()) != d) throw Error(Errc::ModelMismatch, "permutation of wrong size");
      std::vector<Index> sorted = p->image;
      std::sort(sorted.begin(), sorted.end());
      for (Index i = 0; i < d; ++i)
        if (sorted[static_cast<size_t>(i)] != i) throw Error(Errc::InvalidArgument, "not a permutation");
      break;
    }
    case ModelKind::Quantum: {
      const auto* u = std::get_if<ComplexMatrix>(&payload_);
      if (!u) throw Error(Errc::ModelMismatch, "quantum reversible needs a unitary");
      check_square(*u, d, "unitary");
      if (!is_unitary(*u, tol.eq_tol)) throw Error(Errc::InvalidArgument, "matrix is not unitary");
      break;
    }
    case ModelKind::DoubledQuantum: {
      const auto* u = std::get_if<DoubledUnitary>(&payload_);
      if (!u) throw Error(Errc::ModelMismatch, "doubled-quantum reversible needs sector unitaries");
      check_square(u->u0, d, "sector-0 unitary");
      check_square(u->u1, d, "sector-1 unitary");
      if (!is_unitary(u->u0, tol.eq_tol) || !is_unitary(u->u1, tol.eq_tol))
        throw Error(Errc::InvalidArgument, "sector matrix is not unitary");
      break;
    }
    case ModelKind::SquareBit:
    case ModelKind::HalfDisk: {
      const auto* g = std::get_if<GroupElement>(&payload_);
      const int order = model_.kind() == ModelKind::SquareBit ? 8 : 2;
      if (!g || g->index < 0 || g->index >= order) throw Error(Errc::InvalidArgument, "group element out of range");
      break;
    }
  }
}

Reversible Reversible::permutation(std::vector<Index> image) {
  auto model = TheoryModel::classical(static_cast<Index>(image.size()));
  return Reversible(std::move(model), Permutation{std::move(image)});
}

Reversible Reversible::unitary(ComplexMatrix u) {
  auto model = TheoryModel::quantum(u.rows());
  return Reversible(std::move(model), std::move(u));
}

Reversible Reversible::doubled(ComplexMatrix u0, ComplexMatrix u1, bool exchange) {
  auto model = TheoryModel::doubled_quantum(u0.rows());
  return Reversible(std::move(model), DoubledUnitary{std::move(u0), std::move(u1), exchange});
}

Reversible Reversible::square_bit(int element) { return Reversible(TheoryModel::square_bit(), GroupElement{element}); }
Reversible Reversible::half_disk(int element) { return Reversible(TheoryModel::half_disk(), GroupElement{element}); }

// ---------------------------------------------------------------------------
// Operations

Real pair(const Effect& effect, const State& state, const Tolerance& tol) {
  require_same_model(effect.model(), state.model(), "pair");
  Real value = 0;
  switch (state.model().kind()) {
    case ModelKind::Classical:
      value = std::get<RealVector>(effect.payload()).dot(state.probabilities());
      break;
    case ModelKind::Quantum:
      value = real_trace_product(std::get<ComplexMatrix>(effect.payload()), state.density());
      break;
    case ModelKind::DoubledQuantum: {
      const auto& e = std::get<SectorBlocks>(effect.payload());
      const auto& b = state.blocks();
      value = real_trace_product(e.block0, b.block0) + real_trace_product(e.block1, b.block1);
      break;
    }
    case ModelKind::SquareBit:
    case ModelKind::HalfDisk: {
      const auto& e = std::get<Eigen::Vector3d>(effect.payload());
      const auto& p = state.point();
      value = e(0) * p(0) + e(1) * p(1) + e(2);
      break;
    }
  }
  if (value < -tol.eq_tol || value > 1 + tol.eq_tol)
    throw Error(Errc::InvalidArgument, "pairing outside [0,1]: " + std::to_string(value));
  return std::clamp(value, 0.0, 1.0);
}

Effect deterministic_effect(const TheoryModel& model) {
  const Index d = model.d();
  switch (model.kind()) {
    case ModelKind::Classical: return Effect(model, RealVector(RealVector::Ones(d)));
    case ModelKind::Quantum: return Effect(model, ComplexMatrix(ComplexMatrix::Identity(d, d)));
    case ModelKind::DoubledQuantum:
      return Effect(model, SectorBlocks{ComplexMatrix::Identity(d, d), ComplexMatrix::Identity(d, d)});
    case ModelKind::SquareBit:
    case ModelKind::HalfDisk: return Effect(model, Eigen::Vector3d(0, 0, 1));
  }
  throw Error(Errc::Unsupported, "unknown model");
}

State tensor_states(const State& s, const State& t) {
  const TheoryModel model = compose_systems(s.model(), t.model());
  switch (model.kind()) {
    case ModelKind::Classical: {
      const RealMatrix outer = s.probabilities() * t.probabilities().transpose();
      RealVector v(outer.size());
      for (Index i = 0; i < outer.rows(); ++i) v.segment(i * outer.cols(), outer.cols()) = outer.row(i).transpose();
      return State::unchecked(model, std::move(v));
    }
    case ModelKind::Quantum: return State::unchecked(model, kron(s.density(), t.density()));
    case ModelKind::DoubledQuantum: {
      const ComplexMatrix full = kron(direct_sum(s.blocks()), direct_sum(t.blocks()));
      return State::unchecked(model, extract_composite_blocks(full, s.model().d(), t.model().d()));
    }
    default: break;
  }
  throw Error(Errc::UnsupportedComposition, "tensor product unsupported");
}

Effect tensor_effects(const Effect& a, const Effect& b) {
  const TheoryModel model = compose_systems(a.model(), b.model());
  switch (model.kind()) {
    case ModelKind::Classical: {
      const auto& x = std::get<RealVector>(a.payload());
      const auto& y = std::get<RealVector>(b.payload());
      RealVector v(x.size() * y.size());
      for (Index i = 0; i < x.size(); ++i) v.segment(i * y.size(), y.size()) = x(i) * y;
      return Effect(model, std::move(v));
    }
    case ModelKind::Quantum:
      return Effect(model, kron(std::get<ComplexMatrix>(a.payload()), std::get<ComplexMatrix>(b.payload())));
    case ModelKind::DoubledQuantum: {
      const ComplexMatrix full =
          kron(direct_sum(std::get<SectorBlocks>(a.payload())), direct_sum(std::get<SectorBlocks>(b.payload())));
      return Effect(model, extract_composite_blocks(full, a.model().d(), b.model().d()));
    }
    default: break;
  }
  throw Error(Errc::UnsupportedComposition, "tensor product unsupported");
}

State apply_reversible(const Reversible& u, const State& s) {
  require_same_model(u.model(), s.model(), "apply_reversible");
  return std::visit(
      overloaded{
          [&](const Permutation& p) {
            const RealVector& in = s.probabilities();
            RealVector out(in.size());
            for (Index j = 0; j < in.size(); ++j) out(p.image[static_cast<size_t>(j)]) = in(j);
            return State::unchecked(s.model(), std::move(out));
          },
          [&](const ComplexMatrix& m) {
            return State::unchecked(s.model(), ComplexMatrix(m * s.density() * m.adjoint()));
          },
          [&](const DoubledUnitary& m) {
            const SectorBlocks& b = s.blocks();
            const ComplexMatrix& in0 = m.exchange ? b.block1 : b.block0;
            const ComplexMatrix& in1 = m.exchange ? b.block0 : b.block1;
            return State::unchecked(s.model(),
                                    SectorBlocks{m.u0 * in0 * m.u0.adjoint(), m.u1 * in1 * m.u1.adjoint()});
          },
          [&](const GroupElement& g) {
            const Eigen::Vector2d& p = s.point();
            Eigen::Vector2d out;
            if (s.model().kind() == ModelKind::SquareBit) {
              out = dihedral_elements()[static_cast<size_t>(g.index)].cast<Real>() * p;
            } else {
              out = g.index == 0 ? p : Eigen::Vector2d(-p(0), p(1));
            }
            return State::unchecked(s.model(), out);
          },
      },
      u.payload());
}

Reversible inverse(const Reversible& u) {
  return std::visit(
      overloaded{
          [&](const Permutation& p) {
            std::vector<Index> inv(p.image.size());
            for (size_t j = 0; j < p.image.size(); ++j) inv[static_cast<size_t>(p.image[j])] = static_cast<Index>(j);
            return Reversible(u.model(), Permutation{std::move(inv)});
          },
          [&](const ComplexMatrix& m) { return Reversible(u.model(), ComplexMatrix(m.adjoint())); },
          [&](const DoubledUnitary& m) {
            // ((U0 ⊕ U1) E)^-1 = E (U0† ⊕ U1†) = (U1† ⊕ U0†) E.
            if (m.exchange)
              return Reversible(u.model(), DoubledUnitary{m.u1.adjoint(), m.u0.adjoint(), true});
            return Reversible(u.model(), DoubledUnitary{m.u0.adjoint(), m.u1.adjoint(), false});
          },
          [&](const GroupElement& g) {
            if (u.model().kind() == ModelKind::HalfDisk) return u;
            const Eigen::Matrix2i inv = dihedral_elements()[static_cast<size_t>(g.index)].transpose();
            for (int k = 0; k < 8; ++k)
              if (dihedral_elements()[static_cast<size_t>(k)] == inv) return Reversible(u.model(), GroupElement{k});
            throw Error(Errc::InvalidArgument, "dihedral element has no inverse");
          },
      },
      u.payload());
}

namespace {

State quantum_pure(const TheoryModel& model, const ComplexVector& v) {
  return State::unchecked(model, projector(v));
}

State doubled_pure(const TheoryModel& model, int sector, const ComplexVector& v) {
  SectorBlocks b = zero_blocks(model.d());
  (sector == 0 ? b.block0 : b.block1) = projector(v);
  return State::unchecked(model, std::move(b));
}

Effect doubled_pure_effect(const TheoryModel& model, int sector, const ComplexVector& v) {
  SectorBlocks b = zero_blocks(model.d());
  (sector == 0 ? b.block0 : b.block1) = projector(v);
  return Effect(model, std::move(b));
}

PureMaximalSet square_bit_pair(int a, int b) {
  const auto& v = square_bit_vertices();
  const TheoryModel model = TheoryModel::square_bit();
  const bool split_by_y = v[static_cast<size_t>(a)](1) != v[static_cast<size_t>(b)](1);
  PureMaximalSet out;
  for (int k : {a, b}) {
    const Eigen::Vector2d& p = v[static_cast<size_t>(k)];
    out.states.push_back(State::unchecked(model, p));
    out.dagger_effects.emplace_back(model, split_by_y ? Eigen::Vector3d(0, p(1) / 2, 0.5)
                                                      : Eigen::Vector3d(p(0) / 2, 0, 0.5));
  }
  return out;
}

PureMaximalSet maximal_set_from_unitaries(const TheoryModel& model, const ComplexMatrix& u0, const ComplexMatrix& u1) {
  PureMaximalSet out;
  const Index d = model.d();
  switch (model.kind()) {
    case ModelKind::Classical:
      for (Index i = 0; i < d; ++i) {
        RealVector e = RealVector::Zero(d);
        e(i) = 1;
        out.states.push_back(State::unchecked(model, e));
        out.dagger_effects.emplace_back(model, e);
      }
      break;
    case ModelKind::Quantum:
      for (Index i = 0; i < d; ++i) {
        out.states.push_back(quantum_pure(model, u0.col(i)));
        out.dagger_effects.emplace_back(model, projector(u0.col(i)));
      }
      break;
    case ModelKind::DoubledQuantum:
      for (int s = 0; s < 2; ++s)
        for (Index i = 0; i < d; ++i) {
          const ComplexVector v = (s == 0 ? u0 : u1).col(i);
          out.states.push_back(doubled_pure(model, s, v));
          out.dagger_effects.push_back(doubled_pure_effect(model, s, v));
        }
      break;
    default: throw Error(Errc::Unsupported, "no unitary-generated maximal set for " + model.name());
  }
  return out;
}

}  // namespace

PureMaximalSet pure_maximal_set(const TheoryModel& model, std::uint64_t choice_seed) {
  switch (model.kind()) {
    case ModelKind::Classical: return standard_maximal_set(model);
    case ModelKind::Quantum: {
      const ComplexMatrix u = haar_random_unitary(model.d(), choice_seed);
      return maximal_set_from_unitaries(model, u, u);
    }
    case ModelKind::DoubledQuantum:
      return maximal_set_from_unitaries(model, haar_random_unitary(model.d(), derive_seed(choice_seed, 0)),
                                        haar_random_unitary(model.d(), derive_seed(choice_seed, 1)));
    case ModelKind::SquareBit: {
      static constexpr std::array<std::array<int, 2>, 6> pairs{
          {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {1, 3}}};
      const auto& p = pairs[choice_seed % 6];
      return square_bit_pair(p[0], p[1]);
    }
    case ModelKind::HalfDisk: break;
  }
  throw Error(Errc::Unsupported, "half-disk has no pure maximal set structure");
}

PureMaximalSet standard_maximal_set(const TheoryModel& model) {
  switch (model.kind()) {
    case ModelKind::SquareBit: return square_bit_pair(0, 1);
    case ModelKind::HalfDisk: throw Error(Errc::Unsupported, "half-disk has no pure maximal set structure");
    default: {
      const ComplexMatrix id = ComplexMatrix::Identity(model.d(), model.d());
      return maximal_set_from_unitaries(model, id, id);
    }
  }
}

ComplexVector pure_ket(const State& pure, const Tolerance& tol) {
  const auto eig = hermitian_eigendecomposition(pure.density(), tol);
  if (1 - eig.eigenvalues(0) > tol.eq_tol) throw Error(Errc::NotPure, "density matrix is not rank one");
  return normalize_phase(eig.eigenvectors.col(0));
}

std::pair<int, ComplexVector> pure_sector_ket(const State& pure, const Tolerance& tol) {
  const SectorBlocks& b = pure.blocks();
  const Real t0 = b.block0.trace().real();
  const Real t1 = b.block1.trace().real();
  const int sector = t0 >= t1 ? 0 : 1;
  if ((sector == 0 ? t1 : t0) > tol.eq_tol) throw Error(Errc::NotPure, "state spreads over both sectors");
  const auto eig = hermitian_eigendecomposition(sector == 0 ? b.block0 : b.block1, tol);
  if (1 - eig.eigenvalues(0) > tol.eq_tol) throw Error(Errc::NotPure, "sector block is not rank one");
  return {sector, normalize_phase(eig.eigenvectors.col(0))};
}

bool is_pure(const State& s, const Tolerance& tol) {
  switch (s.model().kind()) {
    case ModelKind::Classical: return 1 - s.probabilities().maxCoeff() <= tol.eq_tol;
    case ModelKind::Quantum: return 1 - hermitian_eigendecomposition(s.density(), tol).eigenvalues(0) <= tol.eq_tol;
    case ModelKind::DoubledQuantum:
      try {
        pure_sector_ket(s, tol);
        return true;
      } catch (const Error&) {
        return false;
      }
    case ModelKind::SquareBit: return (s.point().cwiseAbs().array() - 1).abs().maxCoeff() <= tol.eq_tol;
    case ModelKind::HalfDisk: return std::abs(s.point().norm() - 1) <= tol.eq_tol;
  }
  return false;
}

Effect dagger(const State& pure, const Tolerance& tol) {
  if (!is_pure(pure, tol)) throw Error(Errc::NotPure, "dagger needs a pure state");
  const TheoryModel& model = pure.model();
  switch (model.kind()) {
    case ModelKind::Classical: {
      Index arg = 0;
      pure.probabilities().maxCoeff(&arg);
      RealVector e = RealVector::Zero(model.d());
      e(arg) = 1;
      return Effect(model, std::move(e));
    }
    case ModelKind::Quantum: return Effect(model, projector(pure_ket(pure, tol)));
    case ModelKind::DoubledQuantum: {
      const auto [sector, v] = pure_sector_ket(pure, tol);
      return doubled_pure_effect(model, sector, v);
    }
    case ModelKind::SquareBit: {
      const Real y = pure.point()(1) > 0 ? 1.0 : -1.0;
      return Effect(model, Eigen::Vector3d(0, y / 2, 0.5));
    }
    case ModelKind::HalfDisk: {
      const Eigen::Vector2d n = pure.point().normalized();
      return Effect(model, Eigen::Vector3d(n(0) / 2, n(1) / 2, 0.5));
    }
  }
  throw Error(Errc::Unsupported, "unknown model");
}

Diagonalisation diagonalise(const State& s, const Tolerance& tol) {
  const TheoryModel& model = s.model();
  Diagonalisation out;
  switch (model.kind()) {
    case ModelKind::Classical: {
      const RealVector& p = s.probabilities();
      std::vector<Index> order(static_cast<size_t>(p.size()));
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return p(a) > p(b); });
      RealVector w(p.size());
      for (Index k = 0; k < p.size(); ++k) {
        const Index i = order[static_cast<size_t>(k)];
        w(k) = p(i);
        RealVector e = RealVector::Zero(p.size());
        e(i) = 1;
        out.eigenstates.push_back(State::unchecked(model, std::move(e)));
      }
      out.spectrum = Spectrum::from_weights(w, tol);
      break;
    }
    case ModelKind::Quantum: {
      const auto eig = hermitian_eigendecomposition(s.density(), tol);
      for (Index k = 0; k < eig.eigenvalues.size(); ++k)
        out.eigenstates.push_back(quantum_pure(model, normalize_phase(eig.eigenvectors.col(k))));
      out.spectrum = Spectrum::from_weights(eig.eigenvalues, tol);
      break;
    }
    case ModelKind::DoubledQuantum: {
      struct Entry {
        Real value;
        int sector;
        ComplexVector ket;
      };
      std::vector<Entry> entries;
      for (int sector = 0; sector < 2; ++sector) {
        const auto eig =
            hermitian_eigendecomposition(sector == 0 ? s.blocks().block0 : s.blocks().block1, tol);
        for (Index k = 0; k < eig.eigenvalues.size(); ++k)
          entries.push_back({eig.eigenvalues(k), sector, normalize_phase(eig.eigenvectors.col(k))});
      }
      std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.value > b.value; });
      RealVector w(static_cast<Index>(entries.size()));
      for (size_t k = 0; k < entries.size(); ++k) {
        w(static_cast<Index>(k)) = entries[k].value;
        out.eigenstates.push_back(doubled_pure(model, entries[k].sector, entries[k].ket));
      }
      out.spectrum = Spectrum::from_weights(w, tol);
      break;
    }
    case ModelKind::SquareBit: {
      const Real x = s.point()(0), y = s.point()(1);
      std::vector<std::pair<Real, Index>> entries;
      const auto& v = square_bit_vertices();
      for (Index k = 0; k < 4; ++k) {
        const Eigen::Vector2d& p = v[static_cast<size_t>(k)];
        entries.emplace_back((1 + p(0) * x) * (1 + p(1) * y) / 4, k);
      }
      std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      RealVector w(4);
      for (Index k = 0; k < 4; ++k) {
        w(k) = entries[static_cast<size_t>(k)].first;
        out.eigenstates.push_back(State::unchecked(model, v[static_cast<size_t>(entries[static_cast<size_t>(k)].second)]));
      }
      out.spectrum = Spectrum::from_weights(w, tol);
      out.non_unique = true;
      break;
    }
    case ModelKind::HalfDisk: {
      const Real x = s.point()(0), y = std::max(0.0, s.point()(1));
      const Real r = std::sqrt(std::max(0.0, 1 - y * y));
      const Real t = r > 0 ? std::clamp((1 + x / r) / 2, 0.0, 1.0) : 1.0;
      RealVector w(2);
      w << t, 1 - t;
      std::array<Eigen::Vector2d, 2> ends{Eigen::Vector2d(r, y), Eigen::Vector2d(-r, y)};
      if (w(1) > w(0)) {
        std::swap(w(0), w(1));
        std::swap(ends[0], ends[1]);
      }
      for (const auto& e : ends) out.eigenstates.push_back(State::unchecked(model, e));
      out.spectrum = Spectrum::from_weights(w, tol);
      out.non_unique = true;
      break;
    }
  }
  return out;
}

State marginal(const State& s, Factor keep) {
  const TheoryModel& model = s.model();
  if (!model.is_composite()) throw Error(Errc::NotComposite, model.name() + " is not a composite system");
  const TheoryModel& ma = model.factor(Factor::A);
  const TheoryModel& mb = model.factor(Factor::B);
  const TheoryModel& kept = keep == Factor::A ? ma : mb;
  switch (model.kind()) {
    case ModelKind::Classical: {
      const RealVector& p = s.probabilities();
      const Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> grid(
          p.data(), ma.d(), mb.d());
      RealVector out = keep == Factor::A ? RealVector(grid.rowwise().sum()) : RealVector(grid.colwise().sum().transpose());
      return State::unchecked(kept, std::move(out));
    }
    case ModelKind::Quantum: {
      ComplexMatrix out = keep == Factor::A ? partial_trace_second(s.density(), ma.d(), mb.d())
                                            : partial_trace_first(s.density(), ma.d(), mb.d());
      return State::unchecked(kept, std::move(out));
    }
    case ModelKind::DoubledQuantum: {
      const ComplexMatrix full = embed_composite_blocks(s.blocks(), ma.d(), mb.d());
      const ComplexMatrix reduced = keep == Factor::A ? partial_trace_second(full, 2 * ma.d(), 2 * mb.d())
                                                      : partial_trace_first(full, 2 * ma.d(), 2 * mb.d());
      return State::unchecked(kept, split_direct_sum(reduced, kept.d()));
    }
    default: break;
  }
  throw Error(Errc::NotComposite, "marginal unsupported");
}

State mixture(std::span<const Real> weights, std::span<const State> states) {
  if (weights.size() != states.size() || states.empty())
    throw Error(Errc::InvalidArgument, "mixture needs matching non-empty weights and states");
  const TheoryModel& model = states.front().model();
  StatePayload acc = std::visit(
      overloaded{
          [](const RealVector& v) -> StatePayload { return RealVector(RealVector::Zero(v.size())); },
          [](const ComplexMatrix& m) -> StatePayload { return ComplexMatrix(ComplexMatrix::Zero(m.rows(), m.cols())); },
          [](const SectorBlocks& b) -> StatePayload { return zero_blocks(b.block0.rows()); },
          [](const Eigen::Vector2d&) -> StatePayload { return Eigen::Vector2d(Eigen::Vector2d::Zero()); },
      },
      states.front().payload());
  for (size_t k = 0; k < states.size(); ++k) {
    require_same_model(model, states[k].model(), "mixture");
    const Real w = weights[k];
    std::visit(overloaded{
                   [&](RealVector& a) { a += w * states[k].probabilities(); },
                   [&](ComplexMatrix& a) { a += w * states[k].density(); },
                   [&](SectorBlocks& a) {
                     a.block0 += w * states[k].blocks().block0;
                     a.block1 += w * states[k].blocks().block1;
                   },
                   [&](Eigen::Vector2d& a) { a += w * states[k].point(); },
               },
               acc);
  }
  return State::unchecked(model, std::move(acc));
}

Real distance_max(const State& a, const State& b) {
  require_same_model(a.model(), b.model(), "distance");
  switch (a.model().kind()) {
    case ModelKind::Classical: return max_abs_diff(a.probabilities(), b.probabilities());
    case ModelKind::Quantum: return max_abs_diff(a.density(), b.density());
    case ModelKind::DoubledQuantum:
      return std::max(max_abs_diff(a.blocks().block0, b.blocks().block0),
                      max_abs_diff(a.blocks().block1, b.blocks().block1));
    default: return max_abs_diff(a.point(), b.point());
  }
}

Real total_weight(const State& s) {
  switch (s.model().kind()) {
    case ModelKind::Classical: return s.probabilities().sum();
    case ModelKind::Quantum: return s.density().trace().real();
    case ModelKind::DoubledQuantum: return s.blocks().block0.trace().real() + s.blocks().block1.trace().real();
    default: return 1;
  }
}

Reversible random_reversible(const TheoryModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  switch (model.kind()) {
    case ModelKind::Classical: {
      std::vector<Index> image(static_cast<size_t>(model.d()));
      std::iota(image.begin(), image.end(), Index{0});
      std::shuffle(image.begin(), image.end(), rng);
      return Reversible(model, Permutation{std::move(image)});
    }
    case ModelKind::Quantum: return Reversible(model, haar_random_unitary(model.d(), rng()));
    case ModelKind::DoubledQuantum: {
      ComplexMatrix u0 = haar_random_unitary(model.d(), rng());
      ComplexMatrix u1 = haar_random_unitary(model.d(), rng());
      const bool exchange = (rng() & 1U) != 0;
      return Reversible(model, DoubledUnitary{std::move(u0), std::move(u1), exchange});
    }
    case ModelKind::SquareBit: return Reversible(model, GroupElement{static_cast<int>(rng() % 8)});
    case ModelKind::HalfDisk: return Reversible(model, GroupElement{static_cast<int>(rng() % 2)});
  }
  throw Error(Errc::Unsupported, "unknown model");
}

std::vector<Reversible> all_reversibles(const TheoryModel& model) {
  std::vector<Reversible> out;
  switch (model.kind()) {
    case ModelKind::Classical: {
      if (model.d() > 7) throw Error(Errc::Unsupported, "permutation group too large to enumerate");
      std::vector<Index> image(static_cast<size_t>(model.d()));
      std::iota(image.begin(), image.end(), Index{0});
      do {
        out.emplace_back(model, Permutation{image});
      } while (std::next_permutation(image.begin(), image.end()));
      return out;
    }
    case ModelKind::SquareBit:
      for (int k = 0; k < 8; ++k) out.emplace_back(model, GroupElement{k});
      return out;
    case ModelKind::HalfDisk:
      for (int k = 0; k < 2; ++k) out.emplace_back(model, GroupElement{k});
      return out;
    default: break;
  }
  throw Error(Errc::Unsupported, model.name() + " has a continuous reversible group");
}

State random_state(const TheoryModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index d = model.d();
  switch (model.kind()) {
    case ModelKind::Classical: return State(model, random_probability_vector(d, rng));
    case ModelKind::Quantum: return State(model, random_density_matrix(d, rng));
    case ModelKind::DoubledQuantum: {
      std::uniform_real_distribution<Real> unit(0.0, 1.0);
      const Real p = unit(rng);
      ComplexMatrix b0 = p * random_density_matrix(d, rng);
      ComplexMatrix b1 = (1 - p) * random_density_matrix(d, rng);
      return State(model, SectorBlocks{std::move(b0), std::move(b1)});
    }
    case ModelKind::SquareBit: {
      std::uniform_real_distribution<Real> coord(-1.0, 1.0);
      const Real x = coord(rng);
      const Real y = coord(rng);
      return State(model, Eigen::Vector2d(x, y));
    }
    case ModelKind::HalfDisk: {
      std::uniform_real_distribution<Real> coord(-1.0, 1.0);
      for (;;) {
        const Real x = coord(rng);
        const Real y = std::abs(coord(rng));
        if (x * x + y * y <= 1) return State(model, Eigen::Vector2d(x, y));
      }
    }
  }
  throw Error(Errc::Unsupported, "unknown model");
}

State random_pure_state(const TheoryModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index d = model.d();
  switch (model.kind()) {
    case ModelKind::Classical: {
      RealVector e = RealVector::Zero(d);
      e(static_cast<Index>(rng() % static_cast<std::uint64_t>(d))) = 1;
      return State(model, std::move(e));
    }
    case ModelKind::Quantum: return quantum_pure(model, haar_random_unitary(d, rng()).col(0));
    case ModelKind::DoubledQuantum: {
      const int sector = static_cast<int>(rng() & 1U);
      return doubled_pure(model, sector, haar_random_unitary(d, rng()).col(0));
    }
    case ModelKind::SquareBit: return State(model, square_bit_vertices()[rng() % 4]);
    case ModelKind::HalfDisk: {
      std::uniform_real_distribution<Real> angle(0.0, kPi);
      const Real theta = angle(rng);
      return State(model, Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    }
  }
  throw Error(Errc::Unsupported, "unknown model");
}

}  // namespace microtherm
