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

#include "microtherm/serialization.hpp"


namespace microtherm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Runs a parser, reporting malformed documents as ParseError.
template <typename F>
auto parsing(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(Errc::ParseError, std::string(what) + ": " + e.what());
  }
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error(Errc::ParseError, "expected a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.at(0).size());
  RealMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<size_t>(r));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw Error(Errc::ParseError, "ragged matrix");
    for (Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<size_t>(c)).get<Real>();
  }
  return m;
}

Json real_vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector real_vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(Errc::ParseError, "expected an array");
  RealVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<size_t>(i)).get<Real>();
  return v;
}

Json blocks_to_json(const SectorBlocks& b) {
  return Json{{"block0", matrix_to_json(b.block0)}, {"block1", matrix_to_json(b.block1)}};
}

SectorBlocks blocks_from_json(const Json& j) {
  return {matrix_from_json(j.at("block0")), matrix_from_json(j.at("block1"))};
}

Json state_payload_to_json(const State& s) {
  return std::visit(overloaded{
                        [](const RealVector& p) { return Json{{"probs", real_vector_to_json(p)}}; },
                        [](const ComplexMatrix& m) { return matrix_to_json(m); },
                        [](const SectorBlocks& b) { return blocks_to_json(b); },
                        [](const Eigen::Vector2d& p) { return Json{{"xy", {p(0), p(1)}}}; },
                    },
                    s.payload());
}

StatePayload state_payload_from_json(const TheoryModel& model, const Json& j) {
  switch (model.kind()) {
    case ModelKind::Classical: return real_vector_from_json(j.at("probs"));
    case ModelKind::Quantum: return matrix_from_json(j);
    case ModelKind::DoubledQuantum: return blocks_from_json(j);
    case ModelKind::SquareBit:
    case ModelKind::HalfDisk: {
      const RealVector xy = real_vector_from_json(j.at("xy"));
      if (xy.size() != 2) throw Error(Errc::ParseError, "xy needs two coordinates");
      return Eigen::Vector2d(xy(0), xy(1));
    }
  }
  throw Error(Errc::ParseError, "unknown model");
}

Json maximal_set_to_json(const PureMaximalSet& set) {
  Json states = Json::array(), effects = Json::array();
  for (const auto& s : set.states) states.push_back(state_payload_to_json(s));
  for (const auto& e : set.dagger_effects) effects.push_back(effect_to_json(e).at("payload"));
  return Json{{"states", states}, {"effects", effects}};
}

PureMaximalSet maximal_set_from_json(const TheoryModel& model, const Json& j) {
  PureMaximalSet out;
  for (const auto& s : j.at("states")) out.states.push_back(State(model, state_payload_from_json(model, s)));
  for (const auto& e : j.at("effects"))
    out.dagger_effects.push_back(effect_from_json(Json{{"model", model_to_json(model)}, {"payload", e}}));
  return out;
}

Json reversible_payload_to_json(const Reversible& u) {
  return std::visit(overloaded{
                        [](const Permutation& p) { return Json{{"image", p.image}}; },
                        [](const ComplexMatrix& m) { return matrix_to_json(m); },
                        [](const DoubledUnitary& d) {
                          return Json{{"u0", matrix_to_json(d.u0)},
                                      {"u1", matrix_to_json(d.u1)},
                                      {"exchange", d.exchange}};
                        },
                        [](const GroupElement& g) { return Json{{"element", g.index}}; },
                    },
                    u.payload());
}

ReversiblePayload reversible_payload_from_json(const TheoryModel& model, const Json& j) {
  switch (model.kind()) {
    case ModelKind::Classical: return Permutation{j.at("image").get<std::vector<Index>>()};
    case ModelKind::Quantum: return matrix_from_json(j);
    case ModelKind::DoubledQuantum:
      return DoubledUnitary{matrix_from_json(j.at("u0")), matrix_from_json(j.at("u1")),
                            j.value("exchange", false)};
    default: return GroupElement{j.at("element").get<int>()};
  }
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  return Json{{"re", real_matrix_to_json(m.real())}, {"im", real_matrix_to_json(m.imag())}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  return parsing("matrix", [&] {
    const RealMatrix re = real_matrix_from_json(j.at("re"));
    RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
    if (j.contains("im")) im = real_matrix_from_json(j.at("im"));
    if (im.rows() != re.rows() || im.cols() != re.cols())
      throw Error(Errc::ParseError, "real and imaginary parts differ in shape");
    ComplexMatrix m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return m;
  });
}

Json model_to_json(const TheoryModel& model) {
  Json j{{"kind", model_kind_name(model.kind())}, {"d", model.d()}};
  if (model.is_composite())
    j["factors"] = Json::array({model_to_json(model.factor(Factor::A)), model_to_json(model.factor(Factor::B))});
  return j;
}

TheoryModel model_from_json(const Json& j) {
  return parsing("model", [&] {
    const std::string kind = j.at("kind").get<std::string>();
    if (j.contains("factors")) {
      const Json& f = j.at("factors");
      if (!f.is_array() || f.size() != 2) throw Error(Errc::ParseError, "factors must list two models");
      TheoryModel out = compose_systems(model_from_json(f.at(0)), model_from_json(f.at(1)));
      if (kind != model_kind_name(out.kind()) || (j.contains("d") && j.at("d").get<Index>() != out.d()))
        throw Error(Errc::ParseError, "composite model does not match its factors");
      return out;
    }
    if (kind == "square-bit") return TheoryModel::square_bit();
    if (kind == "half-disk") return TheoryModel::half_disk();
    const auto d = j.at("d").get<Index>();
    if (kind == "classical") return TheoryModel::classical(d);
    if (kind == "quantum") return TheoryModel::quantum(d);
    if (kind == "doubled-quantum") return TheoryModel::doubled_quantum(d);
    throw Error(Errc::UnsupportedModel, "unknown model kind '" + kind + "'");
  });
}

Json state_to_json(const State& s) {
  return Json{{"model", model_to_json(s.model())}, {"payload", state_payload_to_json(s)}};
}

State state_from_json(const Json& j, const Tolerance& tol) {
  return parsing("state", [&] {
    const TheoryModel model = model_from_json(j.at("model"));
    return State(model, state_payload_from_json(model, j.at("payload")), tol);
  });
}

Json effect_to_json(const Effect& e) {
  const Json payload = std::visit(overloaded{
                                      [](const RealVector& v) { return Json{{"vector", real_vector_to_json(v)}}; },
                                      [](const ComplexMatrix& m) { return matrix_to_json(m); },
                                      [](const SectorBlocks& b) { return blocks_to_json(b); },
                                      [](const Eigen::Vector3d& f) {
                                        return Json{{"functional", {f(0), f(1), f(2)}}};
                                      },
                                  },
                                  e.payload());
  return Json{{"model", model_to_json(e.model())}, {"payload", payload}};
}

Effect effect_from_json(const Json& j) {
  return parsing("effect", [&] {
    const TheoryModel model = model_from_json(j.at("model"));
    const Json& p = j.at("payload");
    switch (model.kind()) {
      case ModelKind::Classical: return Effect(model, real_vector_from_json(p.at("vector")));
      case ModelKind::Quantum: return Effect(model, matrix_from_json(p));
      case ModelKind::DoubledQuantum: return Effect(model, blocks_from_json(p));
      default: {
        const RealVector f = real_vector_from_json(p.at("functional"));
        if (f.size() != 3) throw Error(Errc::ParseError, "functional needs three coefficients");
        return Effect(model, Eigen::Vector3d(f(0), f(1), f(2)));
      }
    }
  });
}

Json reversible_to_json(const Reversible& u) {
  return Json{{"model", model_to_json(u.model())}, {"payload", reversible_payload_to_json(u)}};
}

Reversible reversible_from_json(const Json& j) {
  return parsing("reversible", [&] {
    const TheoryModel model = model_from_json(j.at("model"));
    return Reversible(model, reversible_payload_from_json(model, j.at("payload")));
  });
}

Json channel_to_json(const Channel& c) {
  Json rep = std::visit(
      overloaded{
          [](const MixtureOfReversibles& m) {
            Json terms = Json::array();
            for (const auto& t : m.terms)
              terms.push_back(Json{{"weight", t.weight}, {"reversible", reversible_payload_to_json(t.reversible)}});
            return Json{{"type", "mixture_of_reversibles"}, {"terms", terms}};
          },
          [](const MeasureAndPrepare& m) {
            Json effects = Json::array(), states = Json::array();
            for (const auto& e : m.effects) effects.push_back(effect_to_json(e).at("payload"));
            for (const auto& s : m.states) states.push_back(state_payload_to_json(s));
            return Json{{"type", "measure_and_prepare"}, {"effects", effects}, {"states", states}};
          },
          [](const OperatorSum& k) {
            Json ops = Json::array();
            for (const auto& op : k.kraus) ops.push_back(matrix_to_json(op));
            return Json{{"type", "operator_sum"}, {"kraus", ops}};
          },
          [](const DoublyStochasticInduced& m) {
            return Json{{"type", "doubly_stochastic_induced"},
                        {"matrix", real_matrix_to_json(m.matrix.matrix())},
                        {"basis_in", maximal_set_to_json(m.basis_in)},
                        {"basis_out", maximal_set_to_json(m.basis_out)}};
          },
      },
      c.representation());
  return Json{{"input", model_to_json(c.input())}, {"output", model_to_json(c.output())}, {"representation", rep}};
}

Channel channel_from_json(const Json& j) {
  return parsing("channel", [&] {
    const TheoryModel in = model_from_json(j.at("input"));
    const TheoryModel out = model_from_json(j.at("output"));
    const Json& rep = j.at("representation");
    const std::string type = rep.at("type").get<std::string>();
    if (type == "mixture_of_reversibles") {
      MixtureOfReversibles m;
      for (const auto& t : rep.at("terms"))
        m.terms.push_back({t.at("weight").get<Real>(), Reversible(in, reversible_payload_from_json(in, t.at("reversible")))});
      return Channel(in, out, std::move(m));
    }
    if (type == "measure_and_prepare") {
      MeasureAndPrepare m;
      for (const auto& e : rep.at("effects"))
        m.effects.push_back(effect_from_json(Json{{"model", model_to_json(in)}, {"payload", e}}));
      for (const auto& s : rep.at("states")) m.states.push_back(State(out, state_payload_from_json(out, s)));
      return Channel(in, out, std::move(m));
    }
    if (type == "operator_sum") {
      OperatorSum k;
      for (const auto& op : rep.at("kraus")) k.kraus.push_back(matrix_from_json(op));
      return Channel(in, out, std::move(k));
    }
    if (type == "doubly_stochastic_induced") {
      return Channel(in, out,
                     DoublyStochasticInduced{DoublyStochasticMatrix(real_matrix_from_json(rep.at("matrix"))),
                                             maximal_set_from_json(in, rep.at("basis_in")),
                                             maximal_set_from_json(out, rep.at("basis_out"))});
    }
    throw Error(Errc::ParseError, "unknown channel representation '" + type + "'");
  });
}

Json spectrum_to_json(const Spectrum& s) { return real_vector_to_json(s.values()); }

Json realization_to_json(const NoisyRealization& n) {
  Json groups = Json::array();
  for (const auto& g : n.controls)
    groups.push_back(Json{{"multiplicity", g.multiplicity}, {"unitary", matrix_to_json(g.unitary)}});
  return Json{{"system", model_to_json(n.system)},
              {"ancilla", model_to_json(n.ancilla_model)},
              {"ancilla_state", n.prepared_ancilla ? state_to_json(*n.prepared_ancilla) : Json("chi")},
              {"control_unitaries", groups}};
}

Json verdict_to_json(const ConvertibilityVerdict& v) {
  Json j{{"relation", relation_name(v.relation)}, {"answer", answer_name(v.answer)}};
  if (v.obstruction) j["obstruction"] = *v.obstruction;
  if (v.note) j["note"] = *v.note;
  if (v.witness) j["witness_residual"] = v.witness_residual;
  if (v.realization) {
    j["realization"] = Json{{"ancilla_dimension", v.realization->ancilla_model.d()},
                            {"control_groups", v.realization->controls.size()},
                            {"rationalization_error", v.realization_error}};
  }
  return j;
}

Json counterexample_to_json(const CounterexampleReport& r) {
  return Json{{"rho", state_to_json(r.rho)},
              {"sigma", state_to_json(r.sigma)},
              {"spectra", {spectrum_to_json(r.spectrum_rho), spectrum_to_json(r.spectrum_sigma)}},
              {"sector_mass", {{r.mass_rho.first, r.mass_rho.second}, {r.mass_sigma.first, r.mass_sigma.second}}},
              {"unital", {verdict_to_json(r.unital_forward), verdict_to_json(r.unital_backward)}},
              {"rare", {verdict_to_json(r.rare_forward), verdict_to_json(r.rare_backward)}},
              {"noisy", verdict_to_json(r.noisy_forward)},
              {"reproduced", r.reproduced()},
              {"failures", r.failures}};
}

Json audit_to_json(const AuditReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e{{"name", c.name}, {"status", check_status_name(c.status)}, {"details", c.details}};
    if (!c.table.empty()) e["table"] = c.table;
    checks.push_back(std::move(e));
  }
  return Json{{"checks", checks}};
}

Json invariant_report_to_json(const InvariantDistributionReport& r) {
  Json witnesses = Json::array();
  for (const auto& m : r.witness_distributions) {
    Json atoms = Json::array();
    for (const auto& [theta, w] : m.atoms) atoms.push_back(Json{{"theta", theta}, {"weight", w}});
    witnesses.push_back(Json{{"atoms", atoms}, {"reflection_invariant", is_reflection_invariant(m)}});
  }
  Json j{{"unique", r.unique}};
  j["orbit_count"] = r.orbit_count ? Json(*r.orbit_count) : Json("infinite");
  j["witness_distributions"] = witnesses;
  return j;
}

Json bipartite_to_json(const PureBipartiteState& psi) {
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < psi.dim_a(); ++i)
    for (Index k = 0; k < psi.dim_b(); ++k) {
      re.push_back(psi.amplitudes()(i, k).real());
      im.push_back(psi.amplitudes()(i, k).imag());
    }
  return Json{{"dims", {psi.dim_a(), psi.dim_b()}}, {"re", re}, {"im", im}};
}

PureBipartiteState bipartite_from_json(const Json& j, const Tolerance& tol) {
  return parsing("bipartite state", [&] {
    const auto dims = j.at("dims").get<std::vector<Index>>();
    if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1) throw Error(Errc::ParseError, "dims must be two positive sizes");
    const RealVector re = real_vector_from_json(j.at("re"));
    const RealVector im = j.contains("im") ? real_vector_from_json(j.at("im")) : RealVector(RealVector::Zero(re.size()));
    if (re.size() != dims[0] * dims[1] || im.size() != re.size())
      throw Error(Errc::ParseError, "amplitude list does not match dims");
    ComplexMatrix m(dims[0], dims[1]);
    for (Index i = 0; i < dims[0]; ++i)
      for (Index k = 0; k < dims[1]; ++k) m(i, k) = Complex(re(i * dims[1] + k), im(i * dims[1] + k));
    return PureBipartiteState(std::move(m), tol);
  });
}

}  // namespace microtherm
