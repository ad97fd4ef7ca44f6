// Copyright 2026 The dfsim Authors
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

#pragma once

// JSON scenario configuration. Every physical parameter is explicit; only the
// numerical tolerances have defaults, and those are echoed in the run report.
//
//   {
//     "scenario": "dfs_immunity",
//     "system": {"num_qubits": 4, "pairs": [[0, 1], [2, 3]],
//                "axes": [{"n": [0, 0, 1], "s": 1.0}, ...],
//                "frequencies": [1.0, 1.0, 1.0, 1.0]},
//     "bath": {"modes": [{"omega": 1.0, "n_max": 6}],
//              "couplings": [[0.3], [0.3], [0.3], [0.3]]},
//     "params": {"epsilon": 0.0, "logical_state": "cat", ...},
//     "times": [0.0, 0.1, ...] or {"linspace": [0.0, 10.0, 101]},
//     "tolerances": {"kernel_tol": 1e-9, "hermitian_tol": 1e-12},
//     "output": "out/dfs_immunity"
//   }

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "dfsim/errors.hpp"
#include "dfsim/model_builder.hpp"
#include "dfsim/operator_core.hpp"
#include "json.hpp"

namespace dfsim::scenario {

using nlohmann::json;

enum class Scenario {
  kDfsImmunity,
  kMismatchSweep,
  kFheMistuning,
  kGeneralNoise,
  kGateCheck,
  kConstraintCert,
  kDephasingOracle,
  kSingletCode,
};

inline constexpr std::array<std::pair<Scenario, const char*>, 8> kScenarioNames{{
    {Scenario::kDfsImmunity, "dfs_immunity"},
    {Scenario::kMismatchSweep, "mismatch_sweep"},
    {Scenario::kFheMistuning, "fhe_mistuning"},
    {Scenario::kGeneralNoise, "general_noise"},
    {Scenario::kGateCheck, "gate_check"},
    {Scenario::kConstraintCert, "constraint_cert"},
    {Scenario::kDephasingOracle, "dephasing_oracle"},
    {Scenario::kSingletCode, "singlet_code"},
}};

inline std::string to_string(Scenario s) {
  for (const auto& [value, name] : kScenarioNames) {
    if (value == s) return name;
  }
  return "unknown";
}

inline Scenario scenario_from_string(const std::string& name) {
  for (const auto& [value, n] : kScenarioNames) {
    if (name == n) return value;
  }
  throw ConfigError("unknown scenario \"" + name + "\"");
}

struct AxisConfig {
  std::array<double, 3> n{0.0, 0.0, 1.0};
  double s = 1.0;

  AxisVector to_axis() const { return AxisVector(n[0], n[1], n[2], s); }
  friend bool operator==(const AxisConfig&, const AxisConfig&) = default;
};

struct SystemConfig {
  std::size_t num_qubits = 0;
  std::vector<QubitPair> pairs;
  std::vector<AxisConfig> axes;
  std::vector<double> frequencies;

  std::vector<AxisVector> axis_vectors() const {
    std::vector<AxisVector> out;
    for (const auto& a : axes) out.push_back(a.to_axis());
    return out;
  }
};

/// Scenario-specific parameters; which ones are required depends on the scenario.
struct ScenarioParams {
  std::optional<double> epsilon;
  std::vector<double> epsilons;
  std::optional<double> code_epsilon;
  std::optional<double> t_star;
  std::vector<double> deltas;
  std::optional<double> g;
  std::optional<double> omega;
  std::vector<std::size_t> n_max_levels;
  std::vector<std::size_t> dims;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> num_axes;
  std::vector<double> gate_times;
  std::optional<std::uint64_t> seed;
  std::optional<json> logical_state;  // "cat", "zero", "plus" or [[re, im], ...]
};

struct Tolerances {
  double kernel_tol = kKernelTol;
  double hermitian_tol = kHermitianTol;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::kDfsImmunity;
  std::optional<SystemConfig> system;
  std::optional<BathSpec> bath;
  ScenarioParams params;
  std::vector<double> times;
  Tolerances tolerances;
  std::string output;

  SystemLayout layout() const {
    return SystemLayout(system->num_qubits, bath ? bath->mode_dims() : std::vector<std::size_t>{}, system->pairs);
  }
};

namespace detail {

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing field \"" + where + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad field \"" + where + key + "\": " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return get_field<T>(j, key, where);
}

template <typename T>
std::vector<T> get_list(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return {};
  return get_field<std::vector<T>>(j, key, where);
}

inline std::vector<double> parse_times(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object() && j.contains("linspace")) {
    const auto& ls = j.at("linspace");
    if (!ls.is_array() || ls.size() != 3) throw ConfigError("bad field \"times.linspace\": expected [start, stop, count]");
    const double a = ls[0].get<double>();
    const double b = ls[1].get<double>();
    const auto n = ls[2].get<std::size_t>();
    if (n < 1) throw ConfigError("bad field \"times.linspace\": count must be >= 1");
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return t;
  }
  throw ConfigError("bad field \"times\": expected a list or {\"linspace\": [start, stop, count]}");
}

inline SystemConfig parse_system(const json& j) {
  SystemConfig s;
  s.num_qubits = get_field<std::size_t>(j, "num_qubits", "system.");
  for (const auto& p : get_list<std::array<std::size_t, 2>>(j, "pairs", "system.")) s.pairs.push_back({p[0], p[1]});
  if (j.contains("axes")) {
    if (!j.at("axes").is_array()) throw ConfigError("bad field \"system.axes\": expected a list");
    for (const auto& a : j.at("axes")) {
      AxisConfig ac;
      ac.n = get_field<std::array<double, 3>>(a, "n", "system.axes[].");
      ac.s = get_field<double>(a, "s", "system.axes[].");
      s.axes.push_back(ac);
    }
  }
  s.frequencies = get_list<double>(j, "frequencies", "system.");
  return s;
}

inline BathSpec parse_bath(const json& j) {
  BathSpec b;
  if (!j.contains("modes") || !j.at("modes").is_array()) throw ConfigError("missing field \"bath.modes\"");
  for (const auto& m : j.at("modes")) {
    b.modes.push_back({get_field<double>(m, "omega", "bath.modes[]."), get_field<std::size_t>(m, "n_max", "bath.modes[].")});
  }
  b.couplings = get_field<std::vector<std::vector<double>>>(j, "couplings", "bath.");
  return b;
}

inline ScenarioParams parse_params(const json& j) {
  const std::string w = "params.";
  ScenarioParams p;
  p.epsilon = get_optional<double>(j, "epsilon", w);
  p.epsilons = get_list<double>(j, "epsilons", w);
  p.code_epsilon = get_optional<double>(j, "code_epsilon", w);
  p.t_star = get_optional<double>(j, "t_star", w);
  p.deltas = get_list<double>(j, "deltas", w);
  p.g = get_optional<double>(j, "g", w);
  p.omega = get_optional<double>(j, "omega", w);
  p.n_max_levels = get_list<std::size_t>(j, "n_max_levels", w);
  p.dims = get_list<std::size_t>(j, "dims", w);
  p.trials = get_optional<std::size_t>(j, "trials", w);
  p.samples = get_optional<std::size_t>(j, "samples", w);
  p.num_axes = get_optional<std::size_t>(j, "num_axes", w);
  p.gate_times = get_list<double>(j, "gate_times", w);
  p.seed = get_optional<std::uint64_t>(j, "seed", w);
  if (j.contains("logical_state")) p.logical_state = j.at("logical_state");
  return p;
}

[[noreturn]] inline void missing(const std::string& field, Scenario s) {
  throw ConfigError("missing field \"" + field + "\" required by scenario " + to_string(s));
}

}  // namespace detail

/// Checks the scenario-specific required fields and value ranges.
inline void validate(const ScenarioConfig& c) {
  const auto s = c.scenario;
  const auto& p = c.params;

  for (std::size_t i = 1; i < c.times.size(); ++i) {
    if (!(c.times[i] > c.times[i - 1])) throw ConfigError("times not increasing");
  }
  if (!(c.tolerances.kernel_tol > 0.0) || !(c.tolerances.hermitian_tol > 0.0)) {
    throw ConfigError("bad field \"tolerances\": tolerances must be positive");
  }

  const bool needs_system = s == Scenario::kDfsImmunity || s == Scenario::kMismatchSweep ||
                            s == Scenario::kFheMistuning || s == Scenario::kGeneralNoise || s == Scenario::kGateCheck;
  const bool needs_bath = needs_system && s != Scenario::kGateCheck;
  const bool needs_times = s != Scenario::kGateCheck && s != Scenario::kConstraintCert;
  const bool needs_state = s == Scenario::kDfsImmunity || s == Scenario::kMismatchSweep ||
                           s == Scenario::kGeneralNoise || s == Scenario::kSingletCode;
  const bool needs_seed = s == Scenario::kGeneralNoise || s == Scenario::kGateCheck ||
                          s == Scenario::kConstraintCert || s == Scenario::kSingletCode;

  if (needs_system && !c.system) detail::missing("system", s);
  if ((needs_bath || s == Scenario::kSingletCode) && !c.bath) detail::missing("bath", s);
  if (needs_times && c.times.empty()) detail::missing("times", s);
  if (needs_state && !p.logical_state) detail::missing("params.logical_state", s);
  if (needs_seed && !p.seed) detail::missing("params.seed", s);

  if (c.system) {
    const auto& sys = *c.system;
    if (needs_system && sys.pairs.empty()) detail::missing("system.pairs", s);
    if (needs_system && sys.axes.size() != sys.pairs.size()) {
      throw ConfigError("bad field \"system.axes\": expected one axis per pair");
    }
    try {
      (void)SystemLayout(sys.num_qubits, {}, sys.pairs);
      for (const auto& a : sys.axes) (void)a.to_axis();
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("bad field \"system\": ") + e.what());
    }
  }
  if (c.bath) {
    try {
      const std::size_t rows = s == Scenario::kSingletCode ? 4 : (c.system ? c.system->num_qubits : 0);
      if (needs_bath || s == Scenario::kSingletCode) c.bath->validate(rows);
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("bad field \"bath\": ") + e.what());
    }
  }

  switch (s) {
    case Scenario::kDfsImmunity:
      if (!p.epsilon) detail::missing("params.epsilon", s);
      break;
    case Scenario::kMismatchSweep:
      if (p.epsilons.size() < 2) detail::missing("params.epsilons (at least two values)", s);
      for (double e : p.epsilons) {
        if (e == 0.0) throw ConfigError("bad field \"params.epsilons\": values must be nonzero");
      }
      if (!p.t_star) detail::missing("params.t_star", s);
      if (!p.code_epsilon) detail::missing("params.code_epsilon", s);
      break;
    case Scenario::kFheMistuning:
      if (p.deltas.empty()) detail::missing("params.deltas", s);
      if (c.system->pairs.size() != 1) throw ConfigError("bad field \"system.pairs\": fhe_mistuning uses one pair");
      if (c.system->axes[0].n[0] != 0.0 || c.system->axes[0].n[1] != 0.0) {
        throw ConfigError("bad field \"system.axes\": fhe_mistuning requires a z axis");
      }
      if (c.system->frequencies.size() != c.system->num_qubits) detail::missing("system.frequencies", s);
      break;
    case Scenario::kGeneralNoise:
      break;
    case Scenario::kGateCheck:
      if (!p.samples) detail::missing("params.samples", s);
      if (p.gate_times.empty()) detail::missing("params.gate_times", s);
      break;
    case Scenario::kConstraintCert:
      if (p.dims.empty()) detail::missing("params.dims", s);
      if (!p.trials) detail::missing("params.trials", s);
      break;
    case Scenario::kDephasingOracle:
      if (!p.g) detail::missing("params.g", s);
      if (!p.omega) detail::missing("params.omega", s);
      if (!(*p.omega > 0.0)) throw ConfigError("bad field \"params.omega\": must be > 0");
      if (p.n_max_levels.size() != 2) detail::missing("params.n_max_levels (two truncations)", s);
      if (p.n_max_levels[0] < 2 || p.n_max_levels[1] < 2) {
        throw ConfigError("bad field \"params.n_max_levels\": truncations must be >= 2");
      }
      break;
    case Scenario::kSingletCode:
      if (!p.num_axes) detail::missing("params.num_axes", s);
      for (const auto& row : c.bath->couplings) {
        if (row != c.bath->couplings.front()) {
          throw ConfigError("bad field \"bath.couplings\": collective coupling needs identical rows");
        }
      }
      break;
  }
}

inline ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ScenarioConfig c;
  try {
    c.scenario = scenario_from_string(detail::get_field<std::string>(j, "scenario", ""));
    if (j.contains("system")) c.system = detail::parse_system(j.at("system"));
    if (j.contains("bath")) c.bath = detail::parse_bath(j.at("bath"));
    if (j.contains("params")) c.params = detail::parse_params(j.at("params"));
    if (j.contains("times")) c.times = detail::parse_times(j.at("times"));
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.tolerances.kernel_tol = detail::get_optional<double>(t, "kernel_tol", "tolerances.").value_or(kKernelTol);
      c.tolerances.hermitian_tol = detail::get_optional<double>(t, "hermitian_tol", "tolerances.").value_or(kHermitianTol);
    }
    c.output = detail::get_optional<std::string>(j, "output", "").value_or("");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

/// Serializes with all defaults filled in; parse_config(to_json(c)) == c.
inline json to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = to_string(c.scenario);
  if (c.system) {
    json s;
    s["num_qubits"] = c.system->num_qubits;
    s["pairs"] = json::array();
    for (const auto& p : c.system->pairs) s["pairs"].push_back({p.first, p.second});
    s["axes"] = json::array();
    for (const auto& a : c.system->axes) s["axes"].push_back({{"n", a.n}, {"s", a.s}});
    s["frequencies"] = c.system->frequencies;
    j["system"] = s;
  }
  if (c.bath) {
    json b;
    b["modes"] = json::array();
    for (const auto& m : c.bath->modes) b["modes"].push_back({{"omega", m.frequency}, {"n_max", m.n_max}});
    b["couplings"] = c.bath->couplings;
    j["bath"] = b;
  }
  const auto& p = c.params;
  json pj = json::object();
  if (p.epsilon) pj["epsilon"] = *p.epsilon;
  if (!p.epsilons.empty()) pj["epsilons"] = p.epsilons;
  if (p.code_epsilon) pj["code_epsilon"] = *p.code_epsilon;
  if (p.t_star) pj["t_star"] = *p.t_star;
  if (!p.deltas.empty()) pj["deltas"] = p.deltas;
  if (p.g) pj["g"] = *p.g;
  if (p.omega) pj["omega"] = *p.omega;
  if (!p.n_max_levels.empty()) pj["n_max_levels"] = p.n_max_levels;
  if (!p.dims.empty()) pj["dims"] = p.dims;
  if (p.trials) pj["trials"] = *p.trials;
  if (p.samples) pj["samples"] = *p.samples;
  if (p.num_axes) pj["num_axes"] = *p.num_axes;
  if (!p.gate_times.empty()) pj["gate_times"] = p.gate_times;
  if (p.seed) pj["seed"] = *p.seed;
  if (p.logical_state) pj["logical_state"] = *p.logical_state;
  j["params"] = pj;
  j["times"] = c.times;
  j["tolerances"] = {{"kernel_tol", c.tolerances.kernel_tol}, {"hermitian_tol", c.tolerances.hermitian_tol}};
  j["output"] = c.output;
  return j;
}

}  // namespace dfsim::scenario
