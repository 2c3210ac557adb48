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

#ifndef QLYAP_MODEL_HPP
#define QLYAP_MODEL_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlyap/quantum_core.hpp"

namespace qlyap {

// Level indices are 0-based throughout the library. Scenario files and CLI
// output use 1-based levels and convert at the boundary.

struct ControlChannel {
  ComplexMatrix hamiltonian;
  double max_strength = 0.0;  // S_k
  std::string label;
};

/// Closed system H(t) = diag(h0) + sum_k u_k H_k in the energy representation.
class QuantumSystem {
 public:
  QuantumSystem(std::vector<double> h0_diag, std::vector<ControlChannel> controls,
                std::string unit = "");

  int dim() const { return static_cast<int>(h0_.size()); }
  std::size_t num_controls() const { return controls_.size(); }
  const std::vector<double>& h0_diag() const { return h0_; }
  double energy(int level) const { return h0_[static_cast<std::size_t>(level)]; }
  const std::vector<ControlChannel>& controls() const { return controls_; }
  const ControlChannel& control(std::size_t k) const { return controls_.at(k); }
  const std::string& unit() const { return unit_; }

  ComplexMatrix h0() const;
  ComplexMatrix hamiltonian(std::span<const double> u) const;

  bool operator==(const QuantumSystem& other) const;

 private:
  std::vector<double> h0_;
  std::vector<ControlChannel> controls_;
  std::string unit_;
};

struct TargetSpec {
  int level = 0;

  TargetSpec() = default;
  explicit TargetSpec(int lvl) : level(lvl) {}
  void validate(int dim) const;
  DensityMatrix state(int dim) const { return DensityMatrix::basis_state(dim, level); }
  bool operator==(const TargetSpec&) const = default;
};

/// omega(a, b) = lambda_a - lambda_b.
RealMatrix transition_frequencies(const QuantumSystem& sys);

struct FrequencyClash {
  int a = 0;
  int b = 0;
  double omega_af = 0.0;
  double omega_bf = 0.0;
};

struct ConditionReport {
  bool distinct_frequencies_ok = true;  // non-degenerate H0, distinguishable omega_jf
  std::vector<FrequencyClash> frequency_clashes;
  bool target_coupling_ok = true;  // every level couples directly to the target
  std::vector<int> uncoupled_levels;

  bool ok() const { return distinct_frequencies_ok && target_coupling_ok; }
  std::string describe() const;
};

ConditionReport check_conditions(const QuantumSystem& sys, const TargetSpec& target,
                                 double tol = 1e-9);

/// Thrown when a routine needs both structural conditions and they fail.
class ConditionError : public ValidationError {
 public:
  explicit ConditionError(ConditionReport report);
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

enum class BuiltinName { two_level, xi_three_level, two_qubit_sc };

BuiltinName parse_builtin_name(std::string_view name);
std::string_view to_string(BuiltinName name);

struct BuiltinSystem {
  QuantumSystem system;
  TargetSpec target;
  DensityMatrix initial;
};

BuiltinSystem builtin_system(BuiltinName name);

}  // namespace qlyap

#endif  // QLYAP_MODEL_HPP
