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

#ifndef QLYAP_OSCILLATION_HPP
#define QLYAP_OSCILLATION_HPP

#include "qlyap/lyapunov.hpp"

namespace qlyap {

/// Two-level system H0 = diag(l1, l2), H1 = [[0, r], [r*, 0]] with the
/// excited level 1 as target and P = diag(p1, p).
struct TwoLevelParams {
  double omega12 = 0.0;  // l1 - l2 > 0
  Complex r{0.0, 0.0};
  double gap = 0.0;       // p - p1
  double strength = 0.0;  // bang-bang S

  void validate() const;
  /// Extracts the parameters and checks the two-level form (N = 2, one control,
  /// zero diagonal in H1, target level 0, omega12 > 0, r != 0).
  static TwoLevelParams from(const QuantumSystem& sys, const LyapunovObservable& obs,
                             double strength);
};

/// |rho12| below this counts as "in the invariant set" rather than chattering.
inline constexpr double kInvariantCoherence = 1e-12;

struct OscillationCheck {
  bool holds = false;
  bool invariant_stall = false;  // rho12 == 0: the control stays zero forever
  double lhs = 0.0;              // |r| (rho11 - rho22) / |rho12|
  double rhs = 0.0;              // omega12 / S
};

/// Sufficient condition for bang-bang chattering at a zero point of T_1:
/// |r| (rho11 - rho22) / |rho12| >= omega12 / S with rho12 != 0.
OscillationCheck evaluate_oscillation_condition(const TwoLevelParams& params,
                                                const DensityMatrix& rho);
bool oscillation_condition(const TwoLevelParams& params, const DensityMatrix& rho);

/// T_1(t) after holding a constant control u for time t, starting from a zero
/// point state (r* rho12 real). Analytic; used as an oracle for the simulator.
double t1_closed_form(const TwoLevelParams& params, const DensityMatrix& rho_zero, double u,
                      double t);

}  // namespace qlyap

#endif  // QLYAP_OSCILLATION_HPP
