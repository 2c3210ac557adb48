// Copyright 2026 The qlyap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qlyap/scenario.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

namespace qlyap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(fmt::format("{}: {}", path, what));
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> known) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) fail(path + "." + key, "unknown field");
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], fmt::format("{}[{}]", path, i)));
  }
  return out;
}

Complex as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {as_number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected a number or an [re, im] pair");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

ComplexMatrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a square matrix (array of rows)");
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const auto rp = fmt::format("{}[{}]", path, r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      fail(rp, fmt::format("expected a row of {} entries", n));
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = as_complex(row[static_cast<std::size_t>(c)], fmt::format("{}[{}]", rp, c));
    }
  }
  return m;
}

ComplexVector as_cvector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = as_complex(j[i], fmt::format("{}[{}]", path, i));
  }
  return v;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rethrows model-level validation errors with the field path in front.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConditionError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

QuantumSystem parse_inline_system(const json& j, const std::string& path) {
  reject_unknown(j, path, {"h0", "controls", "unit"});
  if (!j.contains("h0")) fail(path + ".h0", "missing");
  if (!j.contains("controls")) fail(path + ".controls", "missing");
  auto h0 = as_numbers(j["h0"], path + ".h0");
  const auto& cj = j["controls"];
  if (!cj.is_array()) fail(path + ".controls", "expected an array");
  std::vector<ControlChannel> controls;
  for (std::size_t k = 0; k < cj.size(); ++k) {
    const auto cp = fmt::format("{}.controls[{}]", path, k);
    require_object(cj[k], cp);
    reject_unknown(cj[k], cp, {"h", "max_strength", "label"});
    if (!cj[k].contains("h")) fail(cp + ".h", "missing");
    if (!cj[k].contains("max_strength")) fail(cp + ".max_strength", "missing");
    ControlChannel ch;
    ch.hamiltonian = as_matrix(cj[k]["h"], cp + ".h");
    ch.max_strength = as_number(cj[k]["max_strength"], cp + ".max_strength");
    if (cj[k].contains("label")) ch.label = as_string(cj[k]["label"], cp + ".label");
    controls.push_back(std::move(ch));
  }
  const std::string unit = j.contains("unit") ? as_string(j["unit"], path + ".unit") : "";
  return at_path(path, [&] { return QuantumSystem(std::move(h0), std::move(controls), unit); });
}

DensityMatrix parse_initial(const json& j, int dim, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"density", "pure", "level"});
  if (j.size() != 1) fail(path, "give exactly one of density, pure, level");
  if (j.contains("level")) {
    const int lvl = as_int(j["level"], path + ".level");
    if (lvl < 1 || lvl > dim) fail(path + ".level", fmt::format("must lie in 1..{}", dim));
    return DensityMatrix::basis_state(dim, lvl - 1);
  }
  if (j.contains("pure")) {
    const auto psi = as_cvector(j["pure"], path + ".pure");
    if (psi.size() != dim) fail(path + ".pure", fmt::format("expected {} amplitudes", dim));
    if (psi.norm() == 0.0) fail(path + ".pure", "zero vector");
    return DensityMatrix::pure(psi);
  }
  const auto m = as_matrix(j["density"], path + ".density");
  if (m.rows() != dim) fail(path + ".density", fmt::format("expected a {}x{} matrix", dim, dim));
  return at_path(path + ".density", [&] { return DensityMatrix(m); });
}

PSpec parse_p(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"p", "p_f", "diagonal"});
  PSpec p;
  if (j.contains("diagonal")) {
    if (j.contains("p") || j.contains("p_f")) fail(path, "give either diagonal or p / p_f");
    p.diagonal = as_numbers(j["diagonal"], path + ".diagonal");
    return p;
  }
  if (j.contains("p")) p.p = as_number(j["p"], path + ".p");
  if (j.contains("p_f")) p.p_f = as_number(j["p_f"], path + ".p_f");
  return p;
}

ControllerConfig parse_controller(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"family", "gains", "strengths", "gamma", "eta", "mu", "strength_rule",
                           "zero_tol", "initial_strength"});
  ControllerConfig c;
  if (!j.contains("family")) fail(path + ".family", "missing");
  c.family = at_path(path + ".family", [&] { return parse_family(as_string(j["family"], path + ".family")); });
  if (j.contains("gains")) c.gains = as_numbers(j["gains"], path + ".gains");
  if (j.contains("strengths")) c.strengths = as_numbers(j["strengths"], path + ".strengths");
  if (j.contains("gamma")) c.gamma = as_numbers(j["gamma"], path + ".gamma");
  if (j.contains("eta")) c.eta = as_numbers(j["eta"], path + ".eta");
  if (j.contains("mu")) c.mu = as_number(j["mu"], path + ".mu");
  if (j.contains("strength_rule")) {
    c.strength_rule = at_path(path + ".strength_rule", [&] {
      return parse_strength_rule(as_string(j["strength_rule"], path + ".strength_rule"));
    });
  }
  if (j.contains("zero_tol")) c.zero_tol = as_number(j["zero_tol"], path + ".zero_tol");
  if (j.contains("initial_strength") && !j["initial_strength"].is_null()) {
    c.initial_strength = as_number(j["initial_strength"], path + ".initial_strength");
  }
  return c;
}

SimConfig parse_sim(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"dt", "horizon", "record_stride", "zero_tol", "fidelity_targets",
                           "auto_excitation", "chatter_window", "chatter_dwell", "max_bisection",
                           "spectrum_tol"});
  SimConfig s;
  if (!j.contains("horizon")) fail(path + ".horizon", "missing");
  if (j.contains("dt")) s.dt = as_number(j["dt"], path + ".dt");
  s.horizon = as_number(j["horizon"], path + ".horizon");
  if (j.contains("record_stride")) s.record_stride = as_int(j["record_stride"], path + ".record_stride");
  if (j.contains("zero_tol")) s.zero_tol = as_number(j["zero_tol"], path + ".zero_tol");
  if (j.contains("fidelity_targets")) {
    s.fidelity_targets = as_numbers(j["fidelity_targets"], path + ".fidelity_targets");
  }
  if (j.contains("auto_excitation")) {
    s.auto_excitation = as_bool(j["auto_excitation"], path + ".auto_excitation");
  }
  if (j.contains("chatter_window")) s.chatter_window = as_int(j["chatter_window"], path + ".chatter_window");
  if (j.contains("chatter_dwell")) s.chatter_dwell = as_number(j["chatter_dwell"], path + ".chatter_dwell");
  if (j.contains("max_bisection")) s.max_bisection = as_int(j["max_bisection"], path + ".max_bisection");
  if (j.contains("spectrum_tol")) s.spectrum_tol = as_number(j["spectrum_tol"], path + ".spectrum_tol");
  at_path(path, [&] { s.validate(); });
  return s;
}

PerturbationParams parse_perturbation(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"epsilons", "seeds", "base_seed"});
  PerturbationParams p;
  if (j.contains("epsilons")) p.epsilons = as_numbers(j["epsilons"], path + ".epsilons");
  for (double e : p.epsilons) {
    if (e < 0.0) fail(path + ".epsilons", "values must be >= 0");
  }
  if (j.contains("seeds")) p.seeds = as_int(j["seeds"], path + ".seeds");
  if (p.seeds < 1) fail(path + ".seeds", "must be >= 1");
  if (j.contains("base_seed")) {
    if (!j["base_seed"].is_number_unsigned() && !j["base_seed"].is_number_integer()) {
      fail(path + ".base_seed", "expected a nonnegative integer");
    }
    if (j["base_seed"].is_number_integer() && j["base_seed"].get<long long>() < 0) {
      fail(path + ".base_seed", "expected a nonnegative integer");
    }
    p.base_seed = j["base_seed"].get<std::uint64_t>();
  }
  return p;
}

OutputSpec parse_output(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"trajectory", "svg"});
  OutputSpec o;
  if (j.contains("trajectory")) o.trajectory = as_string(j["trajectory"], path + ".trajectory");
  if (o.trajectory.empty()) fail(path + ".trajectory", "must not be empty");
  if (j.contains("svg")) o.svg = as_bool(j["svg"], path + ".svg");
  return o;
}

}  // namespace

LyapunovObservable Scenario::observable() const {
  if (p.diagonal) return LyapunovObservable::from_diagonal(target, *p.diagonal);
  return build_p(target, system.dim(), p.p, p.p_f);
}

bool Scenario::operator==(const Scenario& o) const {
  return name == o.name && builtin == o.builtin && system == o.system && target == o.target &&
         initial.matrix() == o.initial.matrix() && p == o.p && controller == o.controller &&
         sim == o.sim && perturbation == o.perturbation && output == o.output;
}

Scenario parse_scenario(const json& doc) {
  const std::string root = "scenario";
  require_object(doc, root);
  reject_unknown(doc, root, {"schema_version", "name", "system", "target", "initial", "P",
                             "controller", "sim", "perturbation", "output"});
  if (!doc.contains("schema_version")) fail(root + ".schema_version", "missing");
  const int version = as_int(doc["schema_version"], root + ".schema_version");
  if (version != kSchemaVersion) {
    fail(root + ".schema_version", fmt::format("unsupported version {} (expected {})", version,
                                               kSchemaVersion));
  }
  for (const char* key : {"system", "controller", "sim"}) {
    if (!doc.contains(key)) fail(fmt::format("{}.{}", root, key), "missing");
  }

  const auto& sj = require_object(doc["system"], root + ".system");
  std::optional<BuiltinName> builtin;
  std::optional<BuiltinSystem> base;
  std::optional<QuantumSystem> system;
  if (sj.contains("builtin")) {
    reject_unknown(sj, root + ".system", {"builtin"});
    builtin = at_path(root + ".system.builtin", [&] {
      return parse_builtin_name(as_string(sj["builtin"], root + ".system.builtin"));
    });
    base = builtin_system(*builtin);
    system = base->system;
  } else {
    system = parse_inline_system(sj, root + ".system");
  }
  const int n = system->dim();

  TargetSpec target;
  if (doc.contains("target")) {
    const int level = as_int(doc["target"], root + ".target");
    if (level < 1 || level > n) fail(root + ".target", fmt::format("must lie in 1..{}", n));
    target = TargetSpec(level - 1);
  } else if (base) {
    target = base->target;
  } else {
    fail(root + ".target", "missing (required for inline systems)");
  }

  std::optional<DensityMatrix> initial;
  if (doc.contains("initial")) {
    initial = parse_initial(doc["initial"], n, root + ".initial");
  } else if (base) {
    initial = base->initial;
  } else {
    fail(root + ".initial", "missing (required for inline systems)");
  }

  PSpec p = doc.contains("P") ? parse_p(doc["P"], root + ".P") : PSpec{};
  ControllerConfig controller = parse_controller(doc["controller"], root + ".controller");
  SimConfig sim = parse_sim(doc["sim"], root + ".sim");
  const bool ctrl_tol = doc["controller"].contains("zero_tol");
  const bool sim_tol = doc["sim"].contains("zero_tol");
  if (ctrl_tol && sim_tol && controller.zero_tol != sim.zero_tol) {
    fail(root + ".sim.zero_tol", "differs from controller.zero_tol; the two are shared");
  }
  if (ctrl_tol) sim.zero_tol = controller.zero_tol;
  if (sim_tol) controller.zero_tol = sim.zero_tol;

  Scenario sc{doc.contains("name") ? as_string(doc["name"], root + ".name") : std::string("unnamed"),
              builtin,
              std::move(*system),
              target,
              std::move(*initial),
              std::move(p),
              std::move(controller),
              std::move(sim),
              std::nullopt,
              OutputSpec{}};
  if (doc.contains("perturbation")) {
    sc.perturbation = parse_perturbation(doc["perturbation"], root + ".perturbation");
  }
  if (doc.contains("output")) sc.output = parse_output(doc["output"], root + ".output");

  const auto obs = at_path(root + ".P", [&] { return sc.observable(); });
  at_path(root + ".controller", [&] { (void)resolve_config(sc.controller, sc.system, obs); });
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("{}: cannot open scenario file", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& sc) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = sc.name;
  if (sc.builtin) {
    doc["system"] = {{"builtin", std::string(to_string(*sc.builtin))}};
  } else {
    json controls = json::array();
    for (const auto& c : sc.system.controls()) {
      controls.push_back({{"h", matrix_json(c.hamiltonian)},
                          {"max_strength", c.max_strength},
                          {"label", c.label}});
    }
    doc["system"] = {{"h0", sc.system.h0_diag()}, {"controls", controls}, {"unit", sc.system.unit()}};
  }
  doc["target"] = sc.target.level + 1;
  doc["initial"] = {{"density", matrix_json(sc.initial.matrix())}};
  if (sc.p.diagonal) {
    doc["P"] = {{"diagonal", *sc.p.diagonal}};
  } else {
    doc["P"] = {{"p", sc.p.p}, {"p_f", sc.p.p_f}};
  }
  const auto& c = sc.controller;
  json cj = {{"family", std::string(to_string(c.family))},
             {"gains", c.gains},
             {"strengths", c.strengths},
             {"gamma", c.gamma},
             {"eta", c.eta},
             {"mu", c.mu},
             {"strength_rule", std::string(to_string(c.strength_rule))},
             {"zero_tol", c.zero_tol}};
  if (c.initial_strength) cj["initial_strength"] = *c.initial_strength;
  doc["controller"] = cj;
  const auto& s = sc.sim;
  doc["sim"] = {{"dt", s.dt},
                {"horizon", s.horizon},
                {"record_stride", s.record_stride},
                {"zero_tol", s.zero_tol},
                {"fidelity_targets", s.fidelity_targets},
                {"auto_excitation", s.auto_excitation},
                {"chatter_window", s.chatter_window},
                {"chatter_dwell", s.chatter_dwell},
                {"max_bisection", s.max_bisection},
                {"spectrum_tol", s.spectrum_tol}};
  if (sc.perturbation) {
    doc["perturbation"] = {{"epsilons", sc.perturbation->epsilons},
                           {"seeds", sc.perturbation->seeds},
                           {"base_seed", sc.perturbation->base_seed}};
  }
  doc["output"] = {{"trajectory", sc.output.trajectory}, {"svg", sc.output.svg}};
  return doc;
}

}  // namespace qlyap
