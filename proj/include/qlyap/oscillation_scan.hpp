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


#ifndef QLYAP_OSCILLATION_SCAN_HPP
#define QLYAP_OSCILLATION_SCAN_HPP

#include <optional>

#include "qlyap/simulator.hpp"

namespace qlyap {

struct OnsetScan {
  std::optional<double> onset;             // first zero point where the condition holds
  std::optional<double> chattering_onset;  // empirical flip-count diagnostic
  std::size_t zero_points_checked = 0;
  bool invariant_stall = false;
  /// (t, lhs, rhs) at every located zero point, in time order.
  struct Point {
    double t;
    double lhs;
    double rhs;
    bool holds;
  };
  std::vector<Point> points;
};

/// Runs pure bang-bang feedback (no excitation phase) and evaluates the
/// chattering condition at every located zero point of T_1.
OnsetScan oscillation_onset_scan(const QuantumSystem& sys, const LyapunovObservable& obs,
                                 const DensityMatrix& rho0, ControllerConfig cfg, SimConfig sim);

}  // namespace qlyap

#endif  // QLYAP_OSCILLATION_SCAN_HPP
