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

#include "qlyap/model.hpp"

#include <cmath>

#include <fmt/format.h>

namespace qlyap {

QuantumSystem::QuantumSystem(std::vector<double> h0_diag, std::vector<ControlChannel> controls,
                             std::string unit)
    : h0_(std::move(h0_diag)), controls_(std::move(controls)), unit_(std::move(unit)) {
  const int n = dim();
  if (n < 2) throw ValidationError("QuantumSystem: dimension must be at least 2");
  if (n > numeric_policy().max_dim) {
    throw ValidationError(fmt::format("QuantumSystem: dimension {} exceeds the supported maximum {}",
                                      n, numeric_policy().max_dim));
  }
  for (double e : h0_) {
    if (!std::isfinite(e)) throw ValidationError("QuantumSystem: non-finite H0 entry");
  }
  for (std::size_t k = 0; k < controls_.size(); ++k) {
    const auto& c = controls_[k];
    if (c.hamiltonian.rows() != n || c.hamiltonian.cols() != n) {
      throw ValidationError(fmt::format("QuantumSystem: control {} has shape {}x{}, expected {}x{}",
                                        k + 1, c.hamiltonian.rows(), c.hamiltonian.cols(), n, n));
    }
    if (!is_hermitian(c.hamiltonian, numeric_policy().hermitian_tol)) {
      throw ValidationError(fmt::format("QuantumSystem: control {} is not Hermitian", k + 1));
    }
    if (!(c.max_strength > 0.0) || !std::isfinite(c.max_strength)) {
      throw ValidationError(
          fmt::format("QuantumSystem: control {} needs a positive max strength", k + 1));
    }
  }
  for (std::size_t k = 0; k < controls_.size(); ++k) {
    if (controls_[k].label.empty()) controls_[k].label = fmt::format("u{}", k + 1);
  }
}

ComplexMatrix QuantumSystem::h0() const {
  const RealVector d = Eigen::Map<const RealVector>(h0_.data(), dim());
  return d.cast<Complex>().asDiagonal();
}

ComplexMatrix QuantumSystem::hamiltonian(std::span<const double> u) const {
  if (u.size() != controls_.size()) {
    throw ValidationError(fmt::format("hamiltonian: got {} control values for {} channels",
                                      u.size(), controls_.size()));
  }
  ComplexMatrix h = h0();
  for (std::size_t k = 0; k < controls_.size(); ++k) {
    if (u[k] != 0.0) h += u[k] * controls_[k].hamiltonian;
  }
  return h;
}

bool QuantumSystem::operator==(const QuantumSystem& other) const {
  if (h0_ != other.h0_ || controls_.size() != other.controls_.size()) return false;
  for (std::size_t k = 0; k < controls_.size(); ++k) {
    if (controls_[k].max_strength != other.controls_[k].max_strength) return false;
    if (controls_[k].hamiltonian != other.controls_[k].hamiltonian) return false;
  }
  return true;
}

void TargetSpec::validate(int dim) const {
  if (level < 0 || level >= dim) {
    throw ValidationError(
        fmt::format("target level {} is outside 1..{}", level + 1, dim));
  }
}

RealMatrix transition_frequencies(const QuantumSystem& sys) {
  const int n = sys.dim();
  RealMatrix omega(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) omega(a, b) = sys.energy(a) - sys.energy(b);
  }
  return omega;
}

std::string ConditionReport::describe() const {
  if (ok()) return "conditions satisfied";
  std::string out;
  for (const auto& c : frequency_clashes) {
    out += fmt::format("transition frequencies clash for levels ({}, {}): {} vs {}; ", c.a + 1,
                       c.b + 1, c.omega_af, c.omega_bf);
  }
  for (int j : uncoupled_levels) {
    out += fmt::format("level {} has no direct coupling to the target; ", j + 1);
  }
  return out;
}

ConditionReport check_conditions(const QuantumSystem& sys, const TargetSpec& target, double tol) {
  target.validate(sys.dim());
  const int n = sys.dim();
  const int f = target.level;
  const RealMatrix omega = transition_frequencies(sys);
  ConditionReport report;

  // Levels other than the target must be pairwise separated; that is exactly
  // omega_af != omega_bf. Degeneracy with the target itself shows up as omega_jf = 0.
  for (int a = 0; a < n; ++a) {
    if (a == f) continue;
    if (std::abs(omega(a, f)) <= tol) {
      report.frequency_clashes.push_back({a, f, omega(a, f), 0.0});
    }
    for (int b = a + 1; b < n; ++b) {
      if (b == f) continue;
      if (std::abs(omega(a, f) - omega(b, f)) <= tol) {
        report.frequency_clashes.push_back({a, b, omega(a, f), omega(b, f)});
      }
    }
  }
  report.distinct_frequencies_ok = report.frequency_clashes.empty();

  for (int j = 0; j < n; ++j) {
    if (j == f) continue;
    bool coupled = false;
    for (const auto& c : sys.controls()) {
      if (std::abs(c.hamiltonian(j, f)) > tol) {
        coupled = true;
        break;
      }
    }
    if (!coupled) report.uncoupled_levels.push_back(j);
  }
  report.target_coupling_ok = report.uncoupled_levels.empty();
  return report;
}

ConditionError::ConditionError(ConditionReport report)
    : ValidationError(report.describe()), report_(std::move(report)) {}

BuiltinName parse_builtin_name(std::string_view name) {
  if (name == "two_level") return BuiltinName::two_level;
  if (name == "xi_three_level") return BuiltinName::xi_three_level;
  if (name == "two_qubit_sc") return BuiltinName::two_qubit_sc;
  throw ValidationError(fmt::format(
      "unknown builtin system '{}' (expected two_level, xi_three_level or two_qubit_sc)", name));
}

std::string_view to_string(BuiltinName name) {
  switch (name) {
    case BuiltinName::two_level:
      return "two_level";
    case BuiltinName::xi_three_level:
      return "xi_three_level";
    case BuiltinName::two_qubit_sc:
      return "two_qubit_sc";
  }
  return "unknown";
}

BuiltinSystem builtin_system(BuiltinName name) {
  switch (name) {
    case BuiltinName::two_level: {
      QuantumSystem sys({0.4, 0.0}, {{pauli_x(), 0.2, "u1"}});
      const double s5 = std::sqrt(5.0);
      ComplexMatrix rho0(2, 2);
      rho0 << 1.0, s5, s5, 5.0;
      rho0 /= 6.0;
      return {std::move(sys), TargetSpec(0), DensityMatrix(rho0)};
    }
    case BuiltinName::xi_three_level: {
      ComplexMatrix h1 = ComplexMatrix::Zero(3, 3);
      h1(0, 1) = h1(1, 0) = h1(1, 2) = h1(2, 1) = 1.0;
      QuantumSystem sys({0.0, 0.3, 0.9}, {{h1, 0.1, "u1"}});
      ComplexMatrix rho0 = ComplexMatrix::Constant(3, 3, Complex(1.0 / 3.0, 0.0));
      return {std::move(sys), TargetSpec(1), DensityMatrix(rho0)};
    }
    case BuiltinName::two_qubit_sc: {
      const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
      // H0 already contains the fixed z drives u_1z = 10 GHz and u_2z = 5 GHz:
      // 10 sz(x)I + 5 I(x)sz = diag(15, 5, -5, -15). The admissible bounds are
      // |u_1|, |u_2| <= 10 GHz and |u_3| <= 0.5 GHz.
      QuantumSystem sys({15.0, 5.0, -5.0, -15.0},
                        {{kron(pauli_x(), id2), 10.0, "u1x"},
                         {kron(id2, pauli_x()), 10.0, "u2x"},
                         {kron(pauli_x(), pauli_x()), 0.5, "uxx"}},
                        "GHz");
      const double s13 = std::sqrt(13.0);
      ComplexVector psi(4);
      psi << 1.0, 1.0, 1.0, s13;
      return {std::move(sys), TargetSpec(0), DensityMatrix::pure(psi)};
    }
  }
  throw ValidationError("builtin_system: unknown name");
}

}  // namespace qlyap
