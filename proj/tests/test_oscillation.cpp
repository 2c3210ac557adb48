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

#include <cmath>
#include <numbers>
#include <random>

#include "qlyap/oscillation_scan.hpp"
#include "test_support.hpp"

using namespace qlyap;

namespace {

DensityMatrix pure_two_level(double rho11, double phase = 0.0) {
  ComplexVector psi(2);
  psi << std::sqrt(rho11), std::sqrt(1.0 - rho11) * std::exp(Complex(0.0, phase));
  return DensityMatrix::pure(psi);
}

TwoLevelParams bang_bang_params() {
  const auto tl = builtin_system(BuiltinName::two_level);
  return TwoLevelParams::from(tl.system, build_p(TargetSpec(0), 2), 0.2);
}

}  // namespace

TEST_SUITE("oscillation") {
  TEST_CASE("condition examples") {
    const auto p = bang_bang_params();
    const auto hi = evaluate_oscillation_condition(p, pure_two_level(0.9));
    CHECK(hi.holds);
    CHECK(hi.lhs == doctest::Approx(0.8 / 0.3));
    CHECK(hi.rhs == doctest::Approx(2.0));
    const auto lo = evaluate_oscillation_condition(p, pure_two_level(0.6));
    CHECK_FALSE(lo.holds);
    CHECK(lo.lhs == doctest::Approx(0.2 / std::sqrt(0.24)));
    for (double r11 : {0.5, 0.3, 0.1}) CHECK_FALSE(oscillation_condition(p, pure_two_level(r11)));
    const auto stall = evaluate_oscillation_condition(p, DensityMatrix::basis_state(2, 1));
    CHECK_FALSE(stall.holds);
    CHECK(stall.invariant_stall);
  }

  TEST_CASE("condition depends on |rho12| only") {
    const auto p = bang_bang_params();
    for (double ph : {0.0, 0.7, 2.0, -1.3}) {
      const auto c = evaluate_oscillation_condition(p, pure_two_level(0.9, ph));
      CHECK(c.holds);
      CHECK(c.lhs == doctest::Approx(0.8 / 0.3));
    }
  }

  TEST_CASE("closed form examples") {
    const auto p = bang_bang_params();
    const auto rho = pure_two_level(0.7);
    CHECK(t1_closed_form(p, rho, 0.2, 0.0) == 0.0);
    const double c = std::real(rho(0, 1));
    for (double t : {0.3, 1.0, 4.2}) {
      CHECK(t1_closed_form(p, rho, 0.0, t) ==
            doctest::Approx(-2.0 * 0.5 * c * std::sin(0.4 * t)).epsilon(1e-12));
    }
    const double wu = std::sqrt(0.16 + 4 * 0.04);
    CHECK(std::abs(t1_closed_form(p, rho, 0.2, std::numbers::pi / wu)) < 1e-14);
    CHECK_THROWS_AS(t1_closed_form(p, pure_two_level(0.7, 0.5), 0.2, 1.0), ValidationError);
  }

  TEST_CASE("closed form matches numeric propagation") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(TargetSpec(0), 2);
    const auto p = bang_bang_params();
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> pop(0.01, 0.99);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
      // Zero points: r* rho12 real, i.e. relative phase 0 or pi.
      const auto rho = pure_two_level(pop(gen), sign(gen) ? 0.0 : std::numbers::pi);
      for (double u : {-0.2, 0.0, 0.2}) {
        const double wu = std::sqrt(0.16 + 4 * u * u);
        const std::vector<double> uv{u};
        const HermitianPropagator prop(tl.system.hamiltonian(uv));
        for (int s = 1; s <= 8; ++s) {
          const double t = s * 2 * std::numbers::pi / wu / 8.0;
          const auto rt = propagate_unchecked(prop.at(t), rho);
          CHECK(std::abs(drift_terms(obs, tl.system, rt)[0] - t1_closed_form(p, rho, u, t)) < 1e-8);
        }
      }
    }
  }

  TEST_CASE("parameter extraction") {
    const auto xi = builtin_system(BuiltinName::xi_three_level);
    CHECK_THROWS_AS(TwoLevelParams::from(xi.system, build_p(TargetSpec(1), 3), 0.1), ValidationError);
    const auto tl = builtin_system(BuiltinName::two_level);
    CHECK_THROWS_AS(TwoLevelParams::from(tl.system, build_p(TargetSpec(1), 2), 0.2), ValidationError);
    const auto p = bang_bang_params();
    CHECK(p.omega12 == doctest::Approx(0.4));
    CHECK(p.gap == doctest::Approx(0.5));
  }

  TEST_CASE("onset scan") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(TargetSpec(0), 2);
    ControllerConfig c;
    c.family = Family::bang_bang;
    SimConfig sim;
    sim.horizon = 8.0;
    const auto scan = oscillation_onset_scan(tl.system, obs, tl.initial, c, sim);
    REQUIRE(scan.onset);
    CHECK(*scan.onset == doctest::Approx(5.5).epsilon(0.5 / 5.5));

    const auto none = oscillation_onset_scan(tl.system, obs, DensityMatrix::basis_state(2, 0), c, sim);
    CHECK_FALSE(none.onset);
    const auto stalled =
        oscillation_onset_scan(tl.system, obs, DensityMatrix::basis_state(2, 1), c, sim);
    CHECK_FALSE(stalled.onset);
  }

  TEST_CASE("condition persists from one zero point to the next") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(TargetSpec(0), 2);
    ControllerConfig c;
    c.family = Family::bang_bang;
    SimConfig sim;
    sim.horizon = 12.0;
    const auto scan = oscillation_onset_scan(tl.system, obs, tl.initial, c, sim);
    bool seen = false;
    for (const auto& pt : scan.points) {
      if (seen) CHECK(pt.holds);
      seen = seen || pt.holds;
    }
    CHECK(seen);
  }
}
