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


// qlyap: command-line front end for the Lyapunov control library.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlyap/commands.hpp"

int main(int argc, char** argv) {
  using namespace qlyap;
  CLI::App app{"Rapid Lyapunov control of finite-dimensional quantum systems"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool svg = false;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Base seed for perturbation sampling");
  app.add_option("--workers", workers, "Worker threads (QLYAP_WORKERS overrides)");
  app.add_flag("--svg", svg, "Also write SVG charts");

  std::vector<std::string> scenarios;
  std::string param;
  std::vector<double> values;
  std::vector<double> epsilons;
  std::optional<int> seeds;
  std::optional<double> xi;
  std::string trajectory;

  auto* sim = app.add_subcommand("simulate", "Run one scenario and write its trajectory CSV");
  sim->add_option("--scenario", scenarios, "Scenario JSON")->required()->expected(1);

  auto* cmp = app.add_subcommand("compare", "Run several laws on one system and rank them");
  cmp->add_option("--scenario", scenarios, "Scenario JSON (repeat or list)")->required();

  auto* swp = app.add_subcommand("sweep", "Vary one parameter across values");
  swp->add_option("--scenario", scenarios, "Scenario JSON")->required()->expected(1);
  swp->add_option("--param", param, "gamma, eta, S, K (optionally _k) or dt")->required();
  swp->add_option("--values", values, "Values to try")->required()->delimiter(',');

  auto* rob = app.add_subcommand("robustness", "Check the perturbation distance bound");
  rob->add_option("--scenario", scenarios, "Scenario JSON")->required()->expected(1);
  rob->add_option("--epsilons", epsilons, "Perturbation budgets")->delimiter(',');
  rob->add_option("--seeds", seeds, "Number of seeds per epsilon");
  rob->add_option("--xi", xi, "Also test the budget epsilon for this final-distance target");

  auto* ana = app.add_subcommand("analyze", "Invariant-set and chattering diagnostics");
  ana->add_option("--trajectory", trajectory, "Trajectory CSV written by simulate")->required();
  ana->add_option("--scenario", scenarios, "Scenario JSON")->required()->expected(1);

  for (auto* sub : {sim, cmp, swp, rob, ana}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  CommandOptions opts;
  opts.out_dir = out_dir;
  opts.seed = seed;
  opts.workers = workers;
  opts.svg = svg;

  return guarded(
      [&]() -> int {
        if (*sim) return cmd_simulate(scenarios.front(), opts, std::cout);
        if (*cmp) {
          std::vector<std::filesystem::path> paths(scenarios.begin(), scenarios.end());
          return cmd_compare(paths, opts, std::cout);
        }
        if (*swp) return cmd_sweep(scenarios.front(), param, values, opts, std::cout);
        if (*rob) return cmd_robustness(scenarios.front(), epsilons, seeds, xi, opts, std::cout);
        return cmd_analyze(trajectory, scenarios.front(), opts, std::cout);
      },
      std::cerr);
}
