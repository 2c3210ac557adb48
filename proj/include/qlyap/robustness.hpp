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


#ifndef QLYAP_ROBUSTNESS_HPP
#define QLYAP_ROBUSTNESS_HPP

#include <cstdint>
#include <vector>

#include "qlyap/simulator.hpp"

namespace qlyap {

/// dH = dH0 + sum_k u_k dH_k with ||dH0|| + sum_k S_k ||dH_k|| = epsilon.
struct PerturbationSpec {
  double epsilon = 0.0;
  std::vector<double> dh0;         // real diagonal
  std::vector<ComplexMatrix> dhk;  // Hermitian
  std::uint64_t seed = 0;

  /// ||dH0|| + sum_k S_k ||dH_k|| (spectral norms).
  double budget(const QuantumSystem& sys) const;
  QuantumSystem apply(const QuantumSystem& sys) const;
};

PerturbationSpec sample_perturbation(const QuantumSystem& sys, const TargetSpec& target,
                                     double epsilon, std::uint64_t seed);

struct PairedRun {
  Trajectory nominal;
  Trajectory perturbed;  // same sample times; u replayed, T_k left empty
  std::vector<double> times;
  std::vector<double> distance;  // ||rho~(t) - rho(t)||
};

/// The control computed along the nominal run is replayed open loop on the
/// perturbed system.
PairedRun paired_run(const QuantumSystem& sys, const TargetSpec& target,
                     const PerturbationSpec& perturbation, const ControllerConfig& controller,
                     const LyapunovObservable& obs, const DensityMatrix& rho0,
                     const SimConfig& cfg);

/// Replays a zero-order-hold schedule and returns the state after each of the
/// requested segment counts (nondecreasing).
std::vector<DensityMatrix> replay(const QuantumSystem& sys, const std::vector<ControlSegment>& schedule,
                                  const DensityMatrix& rho0,
                                  const std::vector<std::size_t>& checkpoints);

double distance_bound(double t, double epsilon);

struct BoundReport {
  double min_margin = 0.0;
  double t_at_min = 0.0;
  double max_distance = 0.0;
  bool satisfied = true;
};

inline constexpr double kBoundSlack = 1e-9;

BoundReport check_bound(const std::vector<double>& times, const std::vector<double>& distance,
                        double epsilon);

/// Largest epsilon for which ||rho~(T) - rho_f|| <= xi is guaranteed when the
/// nominal run reaches ||rho(T) - rho_f|| = xi1.
double epsilon_budget(double horizon_t, double xi, double xi1);

}  // namespace qlyap

#endif  // QLYAP_ROBUSTNESS_HPP
