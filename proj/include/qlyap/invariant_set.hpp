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


#ifndef QLYAP_INVARIANT_SET_HPP
#define QLYAP_INVARIANT_SET_HPP

#include <string>
#include <utility>
#include <vector>

#include "qlyap/lyapunov.hpp"

namespace qlyap {

/// Matrices describing the LaSalle invariant set of V = tr(P rho).
struct InvariantSetData {
  int fn = 0;          // N(N-1) - 2
  RealMatrix m;        // rows: even powers 0, 2, ..., FN of omega_jl (row-scaled)
  RealVector omega;    // omega_jl per pair
  RealVector pdiff;    // p_l - p_j per pair
  std::vector<std::pair<int, int>> pair_order;  // (j, l), j < l, 0-based
  double row_scale = 1.0;  // row n was divided by row_scale^n
};

InvariantSetData build_invariant_data(const QuantumSystem& sys, const LyapunovObservable& obs);

/// Entry for pair (j, l) is (H_k)_jl rho_lj.
ComplexVector xi_vector(const QuantumSystem& sys, const DensityMatrix& rho, std::size_t k);

struct MembershipReport {
  bool in_set = false;
  double residual_im = 0.0;
  double residual_re = 0.0;
  bool spectrum_match = false;
};

MembershipReport membership(const QuantumSystem& sys, const LyapunovObservable& obs,
                            const Spectrum& rho0_spectrum, const DensityMatrix& rho_bar,
                            double tol = 1e-8);
MembershipReport membership(const InvariantSetData& data, const QuantumSystem& sys,
                            const Spectrum& rho0_spectrum, const DensityMatrix& rho_bar,
                            double tol = 1e-8);

/// Numerical rank of the columns of M that belong to pairs containing the target.
int target_pair_rank(const InvariantSetData& data, const TargetSpec& target);

struct IsolationReport {
  bool isolated = false;
  std::string e1;  // {rho_f}
  std::string e2;  // states with vanishing target row / column
  /// Two-level only: the pure states of E(rho0), found by testing the basis states.
  std::vector<DensityMatrix> enumerated;
  std::vector<int> enumerated_levels;  // 0-based
};

/// Checks the hypotheses under which rho_f is an isolated point of E(rho0):
/// structural conditions, P of the p / p_f shape, pure rho0, full rank of the
/// target-pair block of M. Throws ConditionError when the conditions fail.
IsolationReport target_isolated(const QuantumSystem& sys, const LyapunovObservable& obs,
                                const TargetSpec& target, const DensityMatrix& rho0);

}  // namespace qlyap

#endif  // QLYAP_INVARIANT_SET_HPP
