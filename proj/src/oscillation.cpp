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

#include "qlyap/oscillation.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qlyap/oscillation_scan.hpp"

namespace qlyap {

void TwoLevelParams::validate() const {
  if (!(omega12 > 0.0)) throw ValidationError("two-level: omega12 must be positive");
  if (!(std::abs(r) > 0.0)) throw ValidationError("two-level: coupling r must be nonzero");
  if (!(gap > 0.0)) throw ValidationError("two-level: gap p - p1 must be positive");
  if (!(strength >= 0.0)) throw ValidationError("two-level: strength must be nonnegative");
}

TwoLevelParams TwoLevelParams::from(const QuantumSystem& sys, const LyapunovObservable& obs,
                                    double strength) {
  if (sys.dim() != 2) {
    throw ValidationError(
        fmt::format("two-level switching laws need N = 2, got N = {}", sys.dim()));
  }
  if (sys.num_controls() != 1) {
    throw ValidationError("two-level switching laws need exactly one control channel");
  }
  if (obs.target().level != 0) {
    throw ValidationError("two-level switching laws target the excited level 1");
  }
  const auto& h1 = sys.control(0).hamiltonian;
  if (std::abs(h1(0, 0)) > 1e-12 || std::abs(h1(1, 1)) > 1e-12) {
    throw ValidationError("two-level switching laws need a purely off-diagonal control Hamiltonian");
  }
  TwoLevelParams params{sys.energy(0) - sys.energy(1), h1(0, 1), obs.gap(), strength};
  params.validate();
  return params;
}

OscillationCheck evaluate_oscillation_condition(const TwoLevelParams& params,
                                                const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ValidationError("oscillation condition: N = 2 required");
  OscillationCheck check;
  const double coherence = std::abs(rho(0, 1));
  check.rhs = params.strength > 0.0 ? params.omega12 / params.strength
                                    : std::numeric_limits<double>::infinity();
  if (coherence <= kInvariantCoherence) {
    check.invariant_stall = true;
    return check;
  }
  check.lhs = std::abs(params.r) * (rho.population(0) - rho.population(1)) / coherence;
  check.holds = check.lhs >= check.rhs;
  return check;
}

bool oscillation_condition(const TwoLevelParams& params, const DensityMatrix& rho) {
  return evaluate_oscillation_condition(params, rho).holds;
}

double t1_closed_form(const TwoLevelParams& params, const DensityMatrix& rho_zero, double u,
                      double t) {
  if (rho_zero.dim() != 2) throw ValidationError("t1_closed_form: N = 2 required");
  const Complex c = std::conj(params.r) * rho_zero(0, 1);
  if (std::abs(c.imag()) > 1e-9) {
    throw ValidationError(fmt::format(
        "t1_closed_form: state is not a zero point of T_1 (Im(r* rho12) = {:.3e})", c.imag()));
  }
  const double r2 = std::norm(params.r);
  const double omega_u = std::sqrt(params.omega12 * params.omega12 + 4.0 * r2 * u * u);
  const double bracket =
      u * r2 * (rho_zero.population(0) - rho_zero.population(1)) - params.omega12 * c.real();
  return 2.0 * params.gap / omega_u * std::sin(omega_u * t) * bracket;
}

OnsetScan oscillation_onset_scan(const QuantumSystem& sys, const LyapunovObservable& obs,
                                 const DensityMatrix& rho0, ControllerConfig cfg, SimConfig sim) {
  cfg.family = Family::bang_bang;
  const auto resolved = resolve_config(cfg, sys, obs);
  const auto params = TwoLevelParams::from(sys, obs, resolved.strengths.at(0));
  sim.auto_excitation = false;
  const auto traj = run(sys, obs.target(), obs, resolved, rho0, sim);

  OnsetScan scan;
  scan.chattering_onset = traj.chattering_onset;
  for (const auto& s : traj.samples) {
    if ((s.flags & flags::zero_point) == 0) continue;
    ++scan.zero_points_checked;
    const auto check = evaluate_oscillation_condition(params, s.rho);
    scan.invariant_stall = scan.invariant_stall || check.invariant_stall;
    scan.points.push_back({s.t, check.lhs, check.rhs, check.holds});
    if (check.holds && !scan.onset) scan.onset = s.t;
  }
  return scan;
}

}  // namespace qlyap
