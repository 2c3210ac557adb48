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
#include <random>

#include "qlyap/controllers.hpp"
#include "test_support.hpp"

using namespace qlyap;
using qlyap::testing::mat2;

namespace {

ControllerConfig cfg_for(Family f) {
  ControllerConfig c;
  c.family = f;
  c.gains = {0.4};
  c.strengths = {0.2};
  c.gamma = {11.0};
  c.eta = {0.01};
  return c;
}

double u1(std::vector<double> (*law)(const ControllerConfig&, std::span<const double>),
          const ControllerConfig& c, double t) {
  const std::vector<double> tk{t};
  return law(c, tk)[0];
}

DensityMatrix pure_two_level(double rho11) {
  ComplexVector psi(2);
  psi << std::sqrt(rho11), std::sqrt(1.0 - rho11);
  return DensityMatrix::pure(psi);
}

}  // namespace

TEST_SUITE("controllers") {
  TEST_CASE("standard law examples") {
    const auto c = cfg_for(Family::standard);
    CHECK(u1(eval_standard, c, 0.0) == 0.0);
    CHECK(u1(eval_standard, c, 0.5) == doctest::Approx(-0.2));
    CHECK(u1(eval_standard, c, -0.5) == doctest::Approx(0.2));
  }

  TEST_CASE("bang-bang law examples") {
    const auto c = cfg_for(Family::bang_bang);
    CHECK(u1(eval_bang_bang, c, 0.3) == -0.2);
    CHECK(u1(eval_bang_bang, c, 0.0) == 0.0);
    CHECK(u1(eval_bang_bang, c, -1e-12) == 0.0);
    CHECK(u1(eval_bang_bang, c, -2e-9) == 0.2);
  }

  TEST_CASE("ABB-I examples") {
    const auto c = cfg_for(Family::abb1);
    CHECK(u1(eval_abb1, c, 0.0) == 0.0);
    // Independent evaluation of the logistic form.
    const double expect = 0.4 / (1.0 + std::exp(5.5)) - 0.2;
    CHECK(u1(eval_abb1, c, 0.5) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(u1(eval_abb1, c, 0.5) == doctest::Approx(-0.19837).epsilon(1e-4));
    CHECK(u1(eval_abb1, c, 1e6) == doctest::Approx(-0.2));
    CHECK(std::isfinite(u1(eval_abb1, c, 1e300)));
  }

  TEST_CASE("ABB-II examples") {
    const auto c = cfg_for(Family::abb2);
    CHECK(u1(eval_abb2, c, 0.0) == 0.0);
    CHECK(u1(eval_abb2, c, 1.0) == doctest::Approx(-0.2 / 1.01));
    CHECK(std::abs(u1(eval_abb2, c, 0.01)) == doctest::Approx(0.1));
    const double beta = 0.7;
    CHECK(std::abs(u1(eval_abb2, c, beta * 0.01 / (1 - beta))) == doctest::Approx(beta * 0.2));
  }

  TEST_CASE("sign contract and strength bound on random inputs") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> t(-5.0, 5.0);
    std::uniform_real_distribution<double> s(0.01, 4.0);
    std::uniform_real_distribution<double> h(0.1, 60.0);
    for (int i = 0; i < 20000; ++i) {
      ControllerConfig c;
      c.strengths = {s(gen)};
      c.gamma = {h(gen)};
      c.eta = {h(gen) / 100.0};
      c.gains = {s(gen)};
      const double x = t(gen);
      for (auto law : {eval_standard, eval_bang_bang, eval_abb1, eval_abb2}) {
        CHECK(u1(law, c, x) * x <= 0.0);
      }
      for (auto law : {eval_bang_bang, eval_abb1, eval_abb2}) {
        CHECK(std::abs(u1(law, c, x)) <= c.strengths[0]);
      }
    }
  }

  TEST_CASE("ABB laws approach bang-bang monotonically with hardness") {
    ControllerConfig c = cfg_for(Family::abb1);
    for (double x : {-0.3, 0.02, 1.5}) {
      double prev = 1e9;
      for (double g : {1.0, 2.0, 5.0, 10.0, 50.0, 200.0}) {
        c.gamma = {g};
        const double gap = std::abs(u1(eval_abb1, c, x) - (-0.2 * (x > 0 ? 1 : -1)));
        CHECK(gap <= prev);
        prev = gap;
      }
      CHECK(prev < 1e-2);
      prev = 1e9;
      for (double eta : {1.0, 0.1, 0.01, 0.001, 1e-5}) {
        c.eta = {eta};
        const double gap = std::abs(u1(eval_abb2, c, x) - (-0.2 * (x > 0 ? 1 : -1)));
        CHECK(gap <= prev);
        prev = gap;
      }
      CHECK(prev < 1e-3);
    }
  }

  TEST_CASE("ABB slopes at zero") {
    ControllerConfig c = cfg_for(Family::abb1);
    const double h = 1e-7;
    for (double g : {2.0, 11.0, 50.0}) {
      c.gamma = {g};
      const double fd = (u1(eval_abb1, c, h) - u1(eval_abb1, c, -h)) / (2 * h);
      CHECK(fd == doctest::Approx(-0.2 * g / 2).epsilon(1e-6));
    }
    for (double eta : {0.005, 0.01, 0.1}) {
      c.eta = {eta};
      const double hh = eta * 1e-7;
      const double fd = (u1(eval_abb2, c, hh) - u1(eval_abb2, c, -hh)) / (2 * hh);
      CHECK(fd == doctest::Approx(-0.2 / eta).epsilon(1e-6));
    }
  }

  TEST_CASE("switching law") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(TargetSpec(0), 2);
    const auto params = TwoLevelParams::from(tl.system, obs, 0.2);
    const auto c = resolve_config(cfg_for(Family::switch_bb_std), tl.system, obs);

    ControllerState st;
    st.strength = 0.2;
    // Condition holds at a zero point: switch to the standard law.
    auto out = eval_switching(c, st, params, pure_two_level(0.9), 0.0);
    CHECK(out.state.mode == Mode::standard);
    CHECK(out.state.switched);
    CHECK(out.u == 0.0);
    // Later calls stay standard, even at zero points.
    auto next = eval_switching(c, out.state, params, pure_two_level(0.9), 0.1);
    CHECK(next.u == doctest::Approx(-0.04));
    CHECK_FALSE(next.state.switched);
    CHECK(next.state.mode == Mode::standard);

    // The initial state fails the condition: stays bang-bang, holds u = 0 at T = 0.
    auto keep = eval_switching(c, st, params, tl.initial, 0.0);
    CHECK(keep.state.mode == Mode::bang_bang);
    CHECK(keep.u == 0.0);
    auto bb = eval_switching(c, keep.state, params, tl.initial, 0.3);
    CHECK(bb.u == -0.2);
  }

  TEST_CASE("switching needs a two-level system") {
    const auto xi = builtin_system(BuiltinName::xi_three_level);
    const auto obs = build_p(TargetSpec(1), 3);
    CHECK_THROWS_AS(Controller(cfg_for(Family::switch_bb_std), xi.system, obs), ValidationError);
    QuantumSystem zero_r({0.4, 0.0}, {{mat2(1.0, 0.0, 0.0, -1.0), 0.2, ""}});
    CHECK_THROWS(Controller(cfg_for(Family::switch_bb_std), zero_r, build_p(TargetSpec(0), 2)));
  }

  TEST_CASE("variable strength rules") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(TargetSpec(0), 2);
    const auto params = TwoLevelParams::from(tl.system, obs, 0.2);
    auto c = resolve_config(cfg_for(Family::switch_var_strength), tl.system, obs);
    const auto rho = pure_two_level(0.9);
    c.mu = 0.9;
    c.strength_rule = StrengthRule::fixed_fraction;
    CHECK(reduced_strength(c, params, rho) == doctest::Approx(0.135));
    c.strength_rule = StrengthRule::coeff_varying;
    CHECK(reduced_strength(c, params, rho) == doctest::Approx(0.081));

    ControllerState st;
    st.strength = 0.2;
    c.strength_rule = StrengthRule::fixed_fraction;
    const auto out = eval_var_strength(c, st, params, rho, 0.0);
    CHECK(out.state.strength == doctest::Approx(0.135));
    CHECK_FALSE(oscillation_condition({params.omega12, params.r, params.gap, 0.135}, rho));
    const auto same = eval_var_strength(c, st, params, pure_two_level(0.6), 0.0);
    CHECK(same.state.strength == 0.2);
  }

  TEST_CASE("configuration resolution") {
    const auto tl = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(TargetSpec(0), 2);
    ControllerConfig c;
    c.family = Family::standard;
    const auto r = resolve_config(c, tl.system, obs);
    REQUIRE(r.gains.size() == 1);
    CHECK(r.gains[0] == doctest::Approx(0.4));
    c.family = Family::abb1;
    CHECK_THROWS_AS(resolve_config(c, tl.system, obs), ValidationError);  // gamma missing
    c.family = Family::switch_var_strength;
    c.mu = 1.0;
    CHECK_THROWS_AS(resolve_config(c, tl.system, obs), ValidationError);
    CHECK(parse_family("abb2") == Family::abb2);
    CHECK_THROWS_AS(parse_family("pid"), ValidationError);
  }
}
