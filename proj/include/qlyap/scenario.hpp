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


#ifndef QLYAP_SCENARIO_HPP
#define QLYAP_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlyap/simulator.hpp"

namespace qlyap {

inline constexpr int kSchemaVersion = 1;

/// Either {p, p_f} or an explicit diagonal.
struct PSpec {
  double p = 1.0;
  double p_f = 0.5;
  std::optional<std::vector<double>> diagonal;

  bool operator==(const PSpec&) const = default;
};

struct PerturbationParams {
  std::vector<double> epsilons{0.01};
  int seeds = 10;
  std::uint64_t base_seed = 0;

  bool operator==(const PerturbationParams&) const = default;
};

struct OutputSpec {
  std::string trajectory = "trajectory.csv";
  bool svg = false;

  bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
  std::string name;
  std::optional<BuiltinName> builtin;  // set when the system came from a builtin
  QuantumSystem system;
  TargetSpec target;
  DensityMatrix initial;
  PSpec p;
  ControllerConfig controller;
  SimConfig sim;
  std::optional<PerturbationParams> perturbation;
  OutputSpec output;

  LyapunovObservable observable() const;
  bool operator==(const Scenario& other) const;
};

/// Validates every field before returning; errors name the offending path,
/// e.g. "scenario.sim.dt: must be positive".
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& sc);

}  // namespace qlyap

#endif  // QLYAP_SCENARIO_HPP
