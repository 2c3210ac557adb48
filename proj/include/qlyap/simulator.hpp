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

#ifndef QLYAP_SIMULATOR_HPP
#define QLYAP_SIMULATOR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlyap/controllers.hpp"

namespace qlyap {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 10.0;
  int record_stride = 1;
  double zero_tol = 1e-9;
  std::vector<double> fidelity_targets{0.95, 0.99};
  /// Drive out of tr(rho0 rho_f) = 0 with a sinusoidal schedule before feedback starts.
  bool auto_excitation = true;
  /// Chattering: this many consecutive zero points of a sign-based law, each
  /// within chatter_dwell steps of the previous one.
  int chatter_window = 50;
  double chatter_dwell = 10.0;
  int max_bisection = 60;
  /// Allowed drift of the state spectrum from the initial one.
  double spectrum_tol = 1e-9;

  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

namespace flags {
inline constexpr unsigned zero_point = 1u << 0;
inline constexpr unsigned switched = 1u << 1;
inline constexpr unsigned chattering = 1u << 2;
inline constexpr unsigned invariant_stall = 1u << 3;
inline constexpr unsigned bisection_fallback = 1u << 4;
inline constexpr unsigned excitation = 1u << 5;
}  // namespace flags

/// "zero_point|switched" style rendering; empty when no flag is set.
std::string flags_to_string(unsigned f);
unsigned parse_flags(std::string_view text);

struct Sample {
  double t = 0.0;
  DensityMatrix rho;
  std::vector<double> u;   // control applied from t onwards
  std::vector<double> tk;  // T_k(t)
  double v = 0.0;
  double fidelity = 0.0;
  std::string mode;
  unsigned flags = 0;
  std::size_t segments_applied = 0;  // index into Trajectory::schedule
};

/// One zero-order-hold interval of the applied control.
struct ControlSegment {
  double t_start = 0.0;
  double duration = 0.0;
  std::vector<double> u;
};

struct ThresholdCrossing {
  double threshold = 0.0;
  std::optional<double> time;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<ControlSegment> schedule;
  std::vector<ThresholdCrossing> crossings;  // resolved at every sub-step
  std::optional<double> chattering_onset;
  std::optional<double> excitation_end;
  Spectrum initial_spectrum;
  double max_spectrum_drift = 0.0;
  std::size_t num_zero_points = 0;
  std::vector<std::string> warnings;

  const Sample& final_sample() const { return samples.back(); }
  bool has_flag(unsigned f) const;
};

/// One exact propagation step: rho' = e^{-iH dt} rho e^{iH dt}, H = H0 + sum u_k H_k.
DensityMatrix step(const QuantumSystem& sys, const DensityMatrix& rho, std::span<const double> u,
                   double dt);

/// Closed-loop run with the control evaluated at each step start and held
/// over the step. Sign changes of any T_k inside a step are located by
/// bisection and the step is split there.
Trajectory run(const QuantumSystem& sys, const TargetSpec& target, const LyapunovObservable& obs,
               const ControllerConfig& controller, const DensityMatrix& rho0,
               const SimConfig& cfg);

/// First sample time with fidelity >= threshold, linearly interpolated.
std::optional<double> time_to_fidelity(const Trajectory& traj, double threshold);

/// First-passage time resolved during the run (independent of record_stride).
std::optional<double> crossing_time(const Trajectory& traj, double threshold);

}  // namespace qlyap

#endif  // QLYAP_SIMULATOR_HPP
