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

#ifndef QLYAP_LYAPUNOV_HPP
#define QLYAP_LYAPUNOV_HPP

#include <optional>
#include <vector>

#include "qlyap/model.hpp"

namespace qlyap {

/// Diagonal observable P with p_j = p for every j != f and p_f < p.
/// V = tr(P rho) is minimal exactly at the target eigenstate.
class LyapunovObservable {
 public:
  LyapunovObservable(TargetSpec target, int dim, double p, double p_f);
  /// Accepts an explicit diagonal; it must already have the p / p_f shape.
  static LyapunovObservable from_diagonal(TargetSpec target, std::vector<double> diag);

  const std::vector<double>& diagonal() const { return diag_; }
  double p() const { return p_; }
  double p_target() const { return p_f_; }
  double gap() const { return p_ - p_f_; }
  const TargetSpec& target() const { return target_; }
  int dim() const { return static_cast<int>(diag_.size()); }
  ComplexMatrix matrix() const;

 private:
  TargetSpec target_;
  std::vector<double> diag_;
  double p_ = 1.0;
  double p_f_ = 0.5;
};

LyapunovObservable build_p(TargetSpec target, int dim, double p = 1.0, double p_f = 0.5);

/// V = tr(P rho).
double lyapunov_value(const LyapunovObservable& obs, const DensityMatrix& rho);

/// T_k = tr(-i rho [P, H_k]) for every control channel, so dV/dt = sum_k u_k T_k.
std::vector<double> drift_terms(const LyapunovObservable& obs, const QuantumSystem& sys,
                                const DensityMatrix& rho);
double drift_term(const LyapunovObservable& obs, const ComplexMatrix& hk, const DensityMatrix& rho);

/// Euclidean norm of column f of H_k with entry f removed.
double target_coupling_norm(const QuantumSystem& sys, const TargetSpec& target, std::size_t k);

/// Upper bound (p - p_f) * ||R_k|| on |T_k| over pure states.
double tk_amplitude_bound(const LyapunovObservable& obs, const QuantumSystem& sys, std::size_t k);

/// K_k = S_k / ((p - p_f) ||R_k||): the largest gain that keeps |K_k T_k| <= S_k.
double standard_gain(const LyapunovObservable& obs, const QuantumSystem& sys, std::size_t k);
double standard_gain(double gap, double coupling_norm, double strength);

enum class AbbFamily { sigmoid, rational };  // ABB-I and ABB-II

/// Smallest p - p_f for which the ABB law reaches beta * S before |T_k| peaks.
double bang_bang_dominance_gap(AbbFamily family, double beta, double hardness,
                               double coupling_norm);

/// Open-loop drive u_k(t) = S_k sin(omega_jf t) on [0, duration], used to leave
/// the set tr(rho rho_f) = 0 before handing over to a feedback law.
struct ExcitationSchedule {
  int level = 0;        // j
  double omega = 0.0;   // omega_jf = lambda_j - lambda_f
  double duration = 0.0;
  std::vector<double> amplitudes;

  std::vector<double> controls_at(double t) const;
};

/// Builds an excitation schedule and verifies it by propagation with step
/// `verify_dt`; doubles the duration up to 8 times if the target population
/// is still zero. Level and duration default as documented in the README.
ExcitationSchedule initial_excitation(const QuantumSystem& sys, const TargetSpec& target,
                                      const DensityMatrix& rho0,
                                      std::optional<std::vector<double>> strengths = std::nullopt,
                                      std::optional<int> level = std::nullopt,
                                      std::optional<double> duration = std::nullopt,
                                      double verify_dt = 1e-3);

/// Runs an excitation schedule with a zero-order hold sampled at step starts.
DensityMatrix apply_excitation(const QuantumSystem& sys, const ExcitationSchedule& schedule,
                               const DensityMatrix& rho0, double dt);

}  // namespace qlyap

#endif  // QLYAP_LYAPUNOV_HPP
