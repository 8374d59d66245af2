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

// microtherm: command-line front end.
//
// Exit codes: 0 yes / success, 1 no / expected outcome missing, 2 unknown,
// 3 no unique microcanonical state, 64 bad input, 65 unsupported model,
// 70 internal inconsistency.

#include "microtherm/audit.hpp"
#include "microtherm/convertibility.hpp"
#include "microtherm/duality.hpp"
#include "microtherm/microcanonical.hpp"
#include "microtherm/serialization.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace microtherm;

namespace {

constexpr int kExitUnknown = 2;
constexpr int kExitNotMicrocanonical = 3;
constexpr int kExitDataErr = 64;
constexpr int kExitUnsupported = 65;
constexpr int kExitSoftware = 70;

struct RunConfig {
  std::uint64_t seed = 0;
  Tolerance tol;
  std::string format = "json";
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

void emit(const RunConfig& cfg, const Json& j, const std::string& text) {
  if (cfg.format == "text")
    std::cout << text;
  else
    std::cout << j.dump(2) << '\n';
}

std::string verdict_text(const ConvertibilityVerdict& v) {
  std::ostringstream os;
  os << "relation: " << relation_name(v.relation) << "\nanswer: " << answer_name(v.answer) << '\n';
  if (v.obstruction) os << "obstruction: " << *v.obstruction << '\n';
  if (v.note) os << "note: " << *v.note << '\n';
  if (v.witness) os << "witness residual: " << v.witness_residual << '\n';
  if (v.realization)
    os << "noisy realization: ancilla dimension " << v.realization->ancilla_model.d() << ", rationalization error "
       << v.realization_error << '\n';
  return os.str();
}

int answer_exit(Answer a) {
  switch (a) {
    case Answer::Yes: return 0;
    case Answer::No: return 1;
    case Answer::Unknown: return kExitUnknown;
  }
  return kExitSoftware;
}

int cmd_convert(const RunConfig& cfg, const std::string& relation, const std::string& rho_path,
                const std::string& sigma_path, std::string witness_path) {
  const State rho = state_from_json(read_json(rho_path), cfg.tol);
  const State sigma = state_from_json(read_json(sigma_path), cfg.tol);
  ConvertibilityVerdict v;
  if (relation == "unital")
    v = unital_convertible(rho, sigma, cfg.tol);
  else if (relation == "rare")
    v = rare_convertible(rho, sigma, cfg.tol);
  else
    v = noisy_convertible(rho, sigma, cfg.tol);
  Json j = verdict_to_json(v);
  if (v.witness) {
    if (witness_path.empty()) witness_path = rho_path + ".witness.json";
    std::ofstream out(witness_path);
    Json w{{"channel", channel_to_json(*v.witness)}};
    if (v.realization) w["noisy_realization"] = realization_to_json(*v.realization);
    out << w.dump(2) << '\n';
    if (!out) throw Error(Errc::ParseError, "cannot write " + witness_path);
    j["witness_file"] = witness_path;
  }
  std::string text = verdict_text(v);
  if (v.witness) text += "witness written to " + witness_path + '\n';
  emit(cfg, j, text);
  return answer_exit(v.answer);
}

// An expected outcome of a counterexample model, with whether it reproduced.
struct Expectation {
  std::string name;
  bool held;
};

int cmd_counterexamples(const RunConfig& cfg, const std::string& which) {
  Json report = Json::object();
  std::vector<Expectation> expected;
  std::ostringstream text;
  const bool all = which == "all";
  if (all || which == "dqt") {
    const CounterexampleReport r = counterexample_report(cfg.tol);
    report["dqt"] = counterexample_to_json(r);
    for (const auto& f : r.failures) expected.push_back({"dqt: " + f, false});
    expected.push_back({"dqt: counterexample reproduces", r.reproduced()});
    text << "doubled qubit: spectra (" << r.spectrum_rho[0] << ", " << r.spectrum_rho[1] << ") and ("
         << r.spectrum_sigma[0] << ", " << r.spectrum_sigma[1] << ")\n"
         << "  sector masses (" << r.mass_rho.first << ", " << r.mass_rho.second << ") vs (" << r.mass_sigma.first
         << ", " << r.mass_sigma.second << ")\n"
         << "  unital rho->sigma " << answer_name(r.unital_forward.answer) << ", sigma->rho "
         << answer_name(r.unital_backward.answer) << "\n  rare rho->sigma " << answer_name(r.rare_forward.answer)
         << ": " << r.rare_forward.obstruction.value_or("") << "\n  noisy rho->sigma "
         << answer_name(r.noisy_forward.answer) << '\n';
  }
  if (all || which == "square-bit") {
    AuditReport a;
    a.checks.push_back(check_permutability_square_bit());
    a.checks.push_back(check_strong_symmetry_square_bit());
    a.checks.push_back(check_transitivity(TheoryModel::square_bit(), 20, cfg.seed, cfg.tol));
    report["square_bit"] = audit_to_json(a);
    expected.push_back({"square-bit: permutability passes", a.checks[0].status == CheckStatus::Pass});
    expected.push_back({"square-bit: strong symmetry fails", a.checks[1].status == CheckStatus::Fail});
    text << a.text_table();
  }
  if (all || which == "half-disk") {
    AuditReport a;
    a.checks.push_back(check_half_disk_nonuniqueness());
    a.checks.push_back(check_transitivity(TheoryModel::half_disk(), 1, cfg.seed, cfg.tol));
    report["half_disk"] = audit_to_json(a);
    report["half_disk"]["invariant_distributions"] =
        invariant_report_to_json(invariant_distribution_report(TheoryModel::half_disk()));
    expected.push_back({"half-disk: two invariant distributions", a.checks[0].status == CheckStatus::Pass});
    expected.push_back({"half-disk: transitivity fails", a.checks[1].status == CheckStatus::Fail});
    text << a.text_table();
  }
  if (expected.empty()) throw Error(Errc::InvalidArgument, "unknown counterexample '" + which + "'");
  bool ok = true;
  for (const auto& e : expected)
    if (!e.held) {
      if (ok) std::cerr << "counterexample not reproduced: " << e.name << '\n';
      ok = false;
    }
  report["reproduced"] = ok;
  emit(cfg, report, text.str());
  return ok ? 0 : 1;
}

int cmd_duality(const RunConfig& cfg, const std::string& phi_path, const std::string& psi_path) {
  const PureBipartiteState phi = bipartite_from_json(read_json(phi_path), cfg.tol);
  const PureBipartiteState psi = bipartite_from_json(read_json(psi_path), cfg.tol);
  const DualityClauses c = duality_clauses(phi, psi, cfg.tol);
  Json j{{"phi", {{"schmidt", spectrum_to_json(schmidt(phi, cfg.tol))}, {"entropy", entanglement_entropy(phi, cfg.tol)}}},
         {"psi", {{"schmidt", spectrum_to_json(schmidt(psi, cfg.tol))}, {"entropy", entanglement_entropy(psi, cfg.tol)}}},
         {"clauses",
          {{"schmidt_majorisation", c.schmidt_majorisation},
           {"marginal_a_rare", c.marginal_a_rare},
           {"marginal_b_rare", c.marginal_b_rare}}},
         {"agree", c.agree()}};
  std::ostringstream text;
  text << "phi -> psi by LOCC (Schmidt majorisation): " << std::boolalpha << c.schmidt_majorisation
       << "\npsi_A -> phi_A by RaRe: " << c.marginal_a_rare << "\npsi_B -> phi_B by RaRe: " << c.marginal_b_rare
       << "\nentropies: " << entanglement_entropy(phi, cfg.tol) << " -> " << entanglement_entropy(psi, cfg.tol)
       << '\n';
  emit(cfg, j, text.str());
  if (!c.agree()) {
    std::cerr << "duality clauses disagree\n";
    return kExitSoftware;
  }
  return 0;
}

TheoryModel parse_model_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  Json j{{"kind", kind}};
  if (colon != std::string::npos) {
    try {
      j["d"] = std::stoll(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad dimension in '" + spec + "'");
    }
  }
  return model_from_json(j);
}

int cmd_microcanonical(const RunConfig& cfg, const std::string& spec) {
  const TheoryModel model = parse_model_spec(spec);
  if (model.kind() == ModelKind::HalfDisk) {
    const InvariantDistributionReport r = invariant_distribution_report(model);
    std::ostringstream text;
    text << "half-disk: no unique invariant state; " << r.witness_distributions.size()
         << " distinct invariant distributions on the arc\n";
    emit(cfg, Json{{"model", model_to_json(model)}, {"microcanonical", nullptr}, {"report", invariant_report_to_json(r)}},
         text.str());
    return kExitNotMicrocanonical;
  }
  const State chi = microcanonical_state(model);
  emit(cfg, state_to_json(chi), state_to_json(chi).dump() + '\n');
  return 0;
}

int cmd_audit(const RunConfig& cfg, int trials) {
  const AuditReport r = run_audit(trials, cfg.seed);
  emit(cfg, audit_to_json(r), r.text_table());
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::UnsupportedModel:
    case Errc::Unsupported:
    case Errc::UnsupportedComposition:
    case Errc::NonUniqueSpectrum: return kExitUnsupported;
    case Errc::NotMicrocanonical: return kExitNotMicrocanonical;
    case Errc::PathDisagreement: return kExitSoftware;
    default: return kExitDataErr;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microcanonical thermodynamics in general probabilistic theories"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  Real tol_override = -1;
  app.add_option("--seed", cfg.seed, "Seed for randomized steps")->capture_default_str();
  app.add_option("--tol", tol_override, "Equality tolerance (default 1e-9)");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  std::string relation, rho_path, sigma_path, witness_path;
  auto* convert = app.add_subcommand("convert", "Decide rho -> sigma under a relation");
  convert->add_option("relation", relation, "rare | noisy | unital")->required()->check(CLI::IsMember({"rare", "noisy", "unital"}));
  convert->add_option("rho", rho_path, "Input state JSON")->required();
  convert->add_option("sigma", sigma_path, "Target state JSON")->required();
  convert->add_option("--witness", witness_path, "Sidecar file for the witness channel (default <rho>.witness.json)");

  std::string which = "all";
  auto* counter = app.add_subcommand("counterexamples", "Reproduce the counterexample models");
  counter->add_option("which", which, "dqt | square-bit | half-disk | all")
      ->check(CLI::IsMember({"dqt", "square-bit", "half-disk", "all"}))
      ->capture_default_str();

  std::string phi_path, psi_path;
  auto* duality = app.add_subcommand("duality", "Entanglement duality report for two pure bipartite states");
  duality->add_option("phi", phi_path, "Source bipartite state JSON")->required();
  duality->add_option("psi", psi_path, "Target bipartite state JSON")->required();

  std::string model_spec;
  auto* micro = app.add_subcommand("microcanonical", "Print the microcanonical state of a model");
  micro->add_option("model", model_spec, "kind[:d], e.g. quantum:3, classical:4, doubled-quantum:2, square-bit")
      ->required();

  int trials = 20;
  auto* audit = app.add_subcommand("audit", "Run the axiom audit");
  audit->add_option("--trials", trials, "Sampled pairs per check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDataErr;
  }
  if (tol_override > 0) cfg.tol.eq_tol = tol_override;

  try {
    if (*convert) return cmd_convert(cfg, relation, rho_path, sigma_path, witness_path);
    if (*counter) return cmd_counterexamples(cfg, which);
    if (*duality) return cmd_duality(cfg, phi_path, psi_path);
    if (*micro) return cmd_microcanonical(cfg, model_spec);
    if (*audit) return cmd_audit(cfg, trials);
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitSoftware;
}
