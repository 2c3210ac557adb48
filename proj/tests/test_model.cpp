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


#include <doctest.h>

#include "qlyap/model.hpp"

using namespace qlyap;

TEST_SUITE("model") {
  TEST_CASE("transition frequencies") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto w = transition_frequencies(tl.system);
    CHECK(w(0, 1) == doctest::Approx(0.4));
    CHECK(w(0, 0) == 0.0);
    const auto xi = builtin_system(BuiltinName::xi_three_level);
    const auto w3 = transition_frequencies(xi.system);
    CHECK(w3(2, 1) == doctest::Approx(0.6));
    CHECK(w3(0, 1) == doctest::Approx(-0.3));
    for (int a = 0; a < 3; ++a) CHECK(w3(a, a) == 0.0);
  }

  TEST_CASE("structural conditions on the builtin systems") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto r1 = check_conditions(tl.system, TargetSpec(0));
    CHECK(r1.distinct_frequencies_ok);
    CHECK(r1.target_coupling_ok);

    const auto xi = builtin_system(BuiltinName::xi_three_level);
    CHECK(check_conditions(xi.system, TargetSpec(1)).ok());
    const auto bad = check_conditions(xi.system, TargetSpec(0));
    CHECK_FALSE(bad.target_coupling_ok);
    REQUIRE(bad.uncoupled_levels.size() == 1);
    CHECK(bad.uncoupled_levels[0] == 2);

    const auto tq = builtin_system(BuiltinName::two_qubit_sc);
    CHECK(check_conditions(tq.system, TargetSpec(0)).ok());
  }

  TEST_CASE("frequency clash is reported") {
    // omega_13 = omega_23 in magnitude only does not clash; equal values do.
    QuantumSystem sys({0.0, 1.0, 2.0}, {{ComplexMatrix::Ones(3, 3), 1.0, ""}});
    // target level 2 (1-based): omega_12 = -1, omega_32 = 1 -> distinct
    CHECK(check_conditions(sys, TargetSpec(1)).distinct_frequencies_ok);
    QuantumSystem deg({0.0, 1.0, 1.0}, {{ComplexMatrix::Ones(3, 3), 1.0, ""}});
    const auto rep = check_conditions(deg, TargetSpec(0));
    CHECK_FALSE(rep.distinct_frequencies_ok);
    CHECK_FALSE(rep.frequency_clashes.empty());
    CHECK_FALSE(rep.describe().empty());
  }

  TEST_CASE("builtin systems") {
    const auto tl = builtin_system(BuiltinName::two_level);
    CHECK(tl.system.h0_diag() == std::vector<double>{0.4, 0.0});
    const auto tq = builtin_system(BuiltinName::two_qubit_sc);
    CHECK(tq.system.h0_diag() == std::vector<double>{15.0, 5.0, -5.0, -15.0});
    CHECK(tq.system.unit() == "GHz");
    CHECK(tq.system.control(0).max_strength == 10.0);
    CHECK(tq.system.control(2).max_strength == 0.5);
    const auto xi = builtin_system(BuiltinName::xi_three_level);
    CHECK(fidelity(xi.initial, xi.target.state(3)) == doctest::Approx(1.0 / 3.0));
    for (auto name : {BuiltinName::two_level, BuiltinName::xi_three_level, BuiltinName::two_qubit_sc}) {
      const auto b = builtin_system(name);
      CHECK(b.initial.purity() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(parse_builtin_name(to_string(name)) == name);
    }
    CHECK_THROWS_AS(parse_builtin_name("three_qubit"), ValidationError);
  }

  TEST_CASE("fixed z drives are folded into H0") {
    // 10 sz (x) I + 5 I (x) sz
    const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix h = 10.0 * kron(pauli_z(), id2) + 5.0 * kron(id2, pauli_z());
    const auto tq = builtin_system(BuiltinName::two_qubit_sc);
    CHECK((h - tq.system.h0()).norm() < 1e-14);
  }

  TEST_CASE("system validation") {
    CHECK_THROWS_AS(QuantumSystem({1.0}, {}), ValidationError);
    ComplexMatrix nh = pauli_x();
    nh(0, 1) = 2.0;
    CHECK_THROWS_AS(QuantumSystem({1.0, 0.0}, {{nh, 1.0, ""}}), ValidationError);
    CHECK_THROWS_AS(QuantumSystem({1.0, 0.0}, {{pauli_x(), 0.0, ""}}), ValidationError);
    CHECK_THROWS_AS(QuantumSystem({1.0, 0.0}, {{ComplexMatrix::Identity(3, 3), 1.0, ""}}),
                    ValidationError);
    const QuantumSystem ok({1.0, 0.0}, {{pauli_x(), 1.0, ""}});
    CHECK(ok.control(0).label == "u1");
    CHECK_THROWS_AS(TargetSpec(2).validate(2), ValidationError);
  }

  TEST_CASE("hamiltonian assembly") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const std::vector<double> u{0.1};
    const ComplexMatrix h = tl.system.hamiltonian(u);
    CHECK(std::abs(h(0, 1) - Complex(0.1)) < 1e-15);
    CHECK(std::abs(h(0, 0) - Complex(0.4)) < 1e-15);
    const std::vector<double> wrong{0.1, 0.2};
    CHECK_THROWS_AS((void)tl.system.hamiltonian(wrong), ValidationError);
  }
}
