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

#include <numbers>

#include "qlyap/quantum_core.hpp"
#include "test_support.hpp"

using namespace qlyap;
using qlyap::testing::mat2;

namespace {
const Complex I{0.0, 1.0};
const double kS5 = std::sqrt(5.0);

DensityMatrix two_level_rho0() { return DensityMatrix(mat2(1.0, kS5, kS5, 5.0) / 6.0); }
}  // namespace

TEST_SUITE("quantum_core") {
  TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(DensityMatrix(mat2(0.5, 0.0, 0.0, 0.5)));
    CHECK_THROWS_AS(DensityMatrix(mat2(0.5, 0.1, 0.0, 0.5)), ValidationError);  // not Hermitian
    CHECK_THROWS_AS(DensityMatrix(mat2(0.6, 0.0, 0.0, 0.5)), ValidationError);  // trace
    CHECK_THROWS_AS(DensityMatrix(mat2(1.2, 0.0, 0.0, -0.2)), ValidationError);  // negative
    ComplexMatrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(DensityMatrix{rect}, ValidationError);
  }

  TEST_CASE("commutator examples") {
    const ComplexMatrix a = mat2(0.5, 0.0, 0.0, 1.0);
    CHECK(commutator(a, a).norm() == 0.0);
    const ComplexMatrix c = commutator(a, pauli_x());
    CHECK(std::abs(c(0, 1) - Complex(-0.5)) < 1e-15);
    CHECK(std::abs(c(1, 0) - Complex(0.5)) < 1e-15);
    CHECK((commutator(pauli_z(), pauli_x()) - 2.0 * I * pauli_y()).norm() < 1e-15);
    CHECK_THROWS_AS(commutator(a, ComplexMatrix::Identity(3, 3)), ValidationError);
  }

  TEST_CASE("matrix exponential examples") {
    const ComplexMatrix h = mat2(0.7, 0.0, 0.0, -1.3);
    const ComplexMatrix u = matrix_exp_skewh(h, 2.0);
    CHECK(std::abs(u(0, 0) - std::exp(-I * 1.4)) < 1e-12);
    CHECK(std::abs(u(1, 1) - std::exp(I * 2.6)) < 1e-12);
    CHECK((matrix_exp_skewh(pauli_x(), std::numbers::pi / 2) + I * pauli_x()).norm() < 1e-12);
    std::mt19937_64 gen(7);
    const ComplexMatrix h3 = testing::random_hermitian(3, gen);
    CHECK((matrix_exp_skewh(h3, 0.0) - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
  }

  TEST_CASE("matrix exponential agrees with an independent series and inverts") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + trial % 4;
      const ComplexMatrix h = testing::random_hermitian(n, gen, 3.0);
      const double t = 0.1 + 0.05 * trial;
      const ComplexMatrix u = matrix_exp_skewh(h, t);
      CHECK((u - testing::taylor_expm(h, t)).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((u * matrix_exp_skewh(h, -t) - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <
            1e-10);
    }
  }

  TEST_CASE("fidelity examples") {
    const auto f = DensityMatrix::basis_state(2, 0);
    CHECK(fidelity(f, f) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fidelity(two_level_rho0(), f) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(fidelity(DensityMatrix::basis_state(2, 1), f) == 0.0);
  }

  TEST_CASE("fidelity ignores the global phase of the target vector") {
    std::mt19937_64 gen(3);
    const auto rho = testing::random_density(3, gen);
    ComplexVector e(3);
    e << 0.0, 1.0, 0.0;
    const auto a = DensityMatrix::pure(e);
    const auto b = DensityMatrix::pure(std::exp(I * 0.73) * e);
    CHECK(fidelity(rho, a) == doctest::Approx(fidelity(rho, b)).epsilon(1e-14));
  }

  TEST_CASE("spectral norm examples") {
    CHECK(spectral_norm(ComplexMatrix::Identity(4, 4)) == doctest::Approx(1.0));
    CHECK(spectral_norm(mat2(3.0, 0.0, 0.0, -5.0)) == doctest::Approx(5.0));
    CHECK(spectral_norm(pauli_x()) == doctest::Approx(1.0));
  }

  TEST_CASE("spectrum examples") {
    const auto s = spectrum(mat2(0.4, 0.0, 0.0, 0.0));
    CHECK(s[0] == doctest::Approx(0.4));
    CHECK(std::abs(s[1]) < 1e-15);
    const auto p = spectrum(two_level_rho0());
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p[1]) < 1e-12);
    const auto x = spectrum(pauli_x());
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(-1.0));
  }

  TEST_CASE("commutator of Hermitian matrices is anti-Hermitian") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = testing::random_hermitian(4, gen);
      const auto b = testing::random_hermitian(4, gen);
      const ComplexMatrix c = commutator(a, b);
      CHECK((c.adjoint() + c).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("unitary conjugation keeps the spectrum") {
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + trial % 3;
      const auto rho = testing::random_density(n, gen);
      const auto u = matrix_exp_skewh(testing::random_hermitian(n, gen, 2.0), 1.7);
      const auto next = propagate_unchecked(u, rho);
      CHECK(spectrum(next).max_deviation(spectrum(rho)) < 1e-10);
    }
  }

  TEST_CASE("pure states and basis states") {
    ComplexVector psi(2);
    psi << 1.0, I;
    const auto rho = DensityMatrix::pure(psi);
    CHECK(rho.purity() == doctest::Approx(1.0));
    CHECK(std::abs(rho(0, 1) - Complex(0.0, -0.5)) < 1e-15);
    CHECK_THROWS_AS(DensityMatrix::basis_state(2, 2), ValidationError);
  }

  TEST_CASE("dimension cap") {
    const int n = numeric_policy().max_dim + 1;
    CHECK_THROWS_AS(DensityMatrix::basis_state(n, 0), ValidationError);
  }
}
