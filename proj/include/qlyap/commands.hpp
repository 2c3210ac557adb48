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


#ifndef QLYAP_COMMANDS_HPP
#define QLYAP_COMMANDS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qlyap/robustness.hpp"
#include "qlyap/scenario.hpp"

namespace qlyap {

enum ExitCode : int { kExitOk = 0, kExitBoundViolation = 1, kExitValidation = 2, kExitNumerical = 3 };

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool svg = false;
};

/// QLYAP_WORKERS beats --workers; the default is the hardware concurrency.
int resolve_workers(std::optional<int> requested);

/// Applies fn to 0..n-1 on a bounded pool. Results keep index order; the
/// exception of the lowest failing index is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::min(count, n); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Trajectory simulate(const Scenario& sc);
std::string summarize(const Scenario& sc, const Trajectory& traj);

/// Sweepable names: gamma, eta, S, K (optionally suffixed _k, 1-based; no
/// suffix means every channel) and dt.
Scenario with_parameter(Scenario sc, const std::string& name, double value);

struct RobustnessResult {
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  BoundReport bound;
  double final_distance = 0.0;         // ||rho~(T) - rho(T)||
  double final_target_distance = 0.0;  // ||rho~(T) - rho_f||
  PairedRun run;
};

std::vector<RobustnessResult> robustness_study(const Scenario& sc,
                                               const std::vector<double>& epsilons, int seeds,
                                               std::uint64_t base_seed, int workers);

/// Maps ValidationError to 2, NumericalError to 3, anything else to 3, and
/// prints the message to err.
int guarded(const std::function<int()>& body, std::ostream& err);

int cmd_simulate(const std::filesystem::path& scenario, const CommandOptions& opts,
                 std::ostream& out);
int cmd_compare(const std::vector<std::filesystem::path>& scenarios, const CommandOptions& opts,
                std::ostream& out);
int cmd_sweep(const std::filesystem::path& scenario, const std::string& param,
              const std::vector<double>& values, const CommandOptions& opts, std::ostream& out);
/// Exit 1 when any bound check fails. With xi set, adds the budget epsilon
/// for (T = horizon, xi, xi1 = nominal final distance to the target).
int cmd_robustness(const std::filesystem::path& scenario, const std::vector<double>& epsilons,
                   std::optional<int> seeds, std::optional<double> xi, const CommandOptions& opts,
                   std::ostream& out);
int cmd_analyze(const std::filesystem::path& trajectory_csv, const std::filesystem::path& scenario,
                const CommandOptions& opts, std::ostream& out);

}  // namespace qlyap

#endif  // QLYAP_COMMANDS_HPP
