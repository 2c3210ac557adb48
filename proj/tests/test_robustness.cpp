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

#include "qlyap/robustness.hpp"

using namespace qlyap;

namespace {

ControllerConfig standard_law() {
  ControllerConfig c;
  c.family = Family::standard;
  c.gains = {0.4};
  return c;
}

}  // namespace

TEST_SUITE("robustness") {
  TEST_CASE("bound formula") {
    CHECK(distance_bound(0.0, 0.1) == 0.0);
    CHECK(distance_bound(5.0, 0.0) == 0.0);
    CHECK(distance_bound(1.0, 0.01) == doctest::Approx(std::expm1(0.02)));
    CHECK(distance_bound(1000.0, 0.05) == 2.0);
  }

  TEST_CASE("epsilon budget") {
    CHECK(epsilon_budget(10.0, 0.1, 0.05) == doctest::Approx(std::log(1.05) / 20.0).epsilon(1e-14));
    CHECK(epsilon_budget(10.0, 0.1, 0.05) == doctest::Approx(0.0024395).epsilon(1e-4));
    CHECK(epsilon_budget(20.0, 0.1, 0.05) == doctest::Approx(epsilon_budget(10.0, 0.1, 0.05) / 2));
    CHECK_THROWS_AS(epsilon_budget(10.0, 0.05, 0.1), ValidationError);
    CHECK_THROWS_AS(epsilon_budget(0.0, 0.1, 0.05), ValidationError);
  }

  TEST_CASE("sampled perturbations spend exactly the budget") {
    for (auto name : {BuiltinName::two_level, BuiltinName::xi_three_level, BuiltinName::two_qubit_sc}) {
      const auto b = builtin_system(name);
      for (double eps : {1e-3, 1e-2, 5e-2}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          const auto pert = sample_perturbation(b.system, b.target, eps, seed);
          CHECK(std::abs(pert.budget(b.system) - eps) <= 1e-12);
          const auto perturbed = pert.apply(b.system);
          CHECK(check_conditions(perturbed, b.target).ok());
        }
      }
    }
  }

  TEST_CASE("zero epsilon and seed determinism") {
    const auto b = builtin_system(BuiltinName::two_level);
    const auto none = sample_perturbation(b.system, b.target, 0.0, 3);
    CHECK(none.budget(b.system) == 0.0);
    CHECK(none.apply(b.system) == b.system);
    const auto a = sample_perturbation(b.system, b.target, 0.01, 42);
    const auto c = sample_perturbation(b.system, b.target, 0.01, 42);
    const auto d = sample_perturbation(b.system, b.target, 0.01, 43);
    CHECK(a.dh0 == c.dh0);
    CHECK(a.dhk[0] == c.dhk[0]);
    CHECK(a.dh0 != d.dh0);
  }

  TEST_CASE("replay reproduces the closed-loop run") {
    const auto b = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(b.target, 2);
    SimConfig sim;
    sim.horizon = 8.0;
    sim.record_stride = 50;
    const auto zero = sample_perturbation(b.system, b.target, 0.0, 0);
    const auto pr = paired_run(b.system, b.target, zero, standard_law(), obs, b.initial, sim);
    REQUIRE(pr.times.size() == pr.nominal.samples.size());
    for (double d : pr.distance) CHECK(d < 1e-12);
  }

  TEST_CASE("distance stays under the bound") {
    const auto b = builtin_system(BuiltinName::two_level);
    const auto obs = build_p(b.target, 2);
    SimConfig sim;
    sim.horizon = 20.0;
    sim.record_stride = 20;
    for (double eps : {1e-3, 1e-2, 5e-2}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto pert = sample_perturbation(b.system, b.target, eps, seed);
        const auto pr = paired_run(b.system, b.target, pert, standard_law(), obs, b.initial, sim);
        const auto rep = check_bound(pr.times, pr.distance, eps);
        CHECK(rep.satisfied);
        CHECK(rep.min_margin >= -kBoundSlack);
      }
    }
  }

  TEST_CASE("check_bound reports a violation") {
    const std::vector<double> t{0.0, 1.0};
    const std::vector<double> d{0.0, 0.5};
    const auto rep = check_bound(t, d, 0.01);
    CHECK_FALSE(rep.satisfied);
    CHECK(rep.t_at_min == 1.0);
    CHECK(rep.max_distance == 0.5);
  }
}
