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

#include "qlyap/lyapunov.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace qlyap {

namespace {

constexpr double kImagResidueTol = 1e-9;
constexpr double kZeroPopulation = 1e-10;

}  // namespace

LyapunovObservable::LyapunovObservable(TargetSpec target, int dim, double p, double p_f)
    : target_(target), p_(p), p_f_(p_f) {
  target_.validate(dim);
  if (!(p_f >= 0.0) || !(p > p_f) || !std::isfinite(p)) {
    throw ValidationError(fmt::format("P: need p > p_f >= 0, got p = {}, p_f = {}", p, p_f));
  }
  diag_.assign(static_cast<std::size_t>(dim), p);
  diag_[static_cast<std::size_t>(target_.level)] = p_f;
}

LyapunovObservable LyapunovObservable::from_diagonal(TargetSpec target, std::vector<double> diag) {
  const int n = static_cast<int>(diag.size());
  target.validate(n);
  const double p_f = diag[static_cast<std::size_t>(target.level)];
  const double p = diag[target.level == 0 ? 1u : 0u];
  for (int j = 0; j < n; ++j) {
    if (j != target.level && diag[static_cast<std::size_t>(j)] != p) {
      throw ValidationError(
          "P: every non-target diagonal entry must share one value p (got a non-uniform diagonal)");
    }
  }
  return LyapunovObservable(target, n, p, p_f);
}

ComplexMatrix LyapunovObservable::matrix() const {
  const RealVector d = Eigen::Map<const RealVector>(diag_.data(), dim());
  return d.cast<Complex>().asDiagonal();
}

LyapunovObservable build_p(TargetSpec target, int dim, double p, double p_f) {
  return LyapunovObservable(target, dim, p, p_f);
}

double lyapunov_value(const LyapunovObservable& obs, const DensityMatrix& rho) {
  if (rho.dim() != obs.dim()) throw ValidationError("lyapunov_value: dimension mismatch");
  double v = 0.0;
  for (int j = 0; j < obs.dim(); ++j) v += obs.diagonal()[static_cast<std::size_t>(j)] * rho.population(j);
  return v;
}

double drift_term(const LyapunovObservable& obs, const ComplexMatrix& hk, const DensityMatrix& rho) {
  const int n = obs.dim();
  if (rho.dim() != n || hk.rows() != n) throw ValidationError("drift_terms: dimension mismatch");
  const auto& p = obs.diagonal();
  // [P, H]_jl = (p_j - p_l) H_jl, and tr(rho C) = sum_jl rho_lj C_jl.
  Complex acc = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double dp = p[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(l)];
      if (dp == 0.0) continue;
      acc += rho(l, j) * dp * hk(j, l);
    }
  }
  const Complex tk = Complex(0.0, -1.0) * acc;
  if (!(std::abs(tk.imag()) <= kImagResidueTol)) {
    throw NumericalError(fmt::format(
        "drift_terms: imaginary residue {:.3e} (state or Hamiltonian lost Hermiticity)", tk.imag()));
  }
  return tk.real();
}

std::vector<double> drift_terms(const LyapunovObservable& obs, const QuantumSystem& sys,
                                const DensityMatrix& rho) {
  std::vector<double> out;
  out.reserve(sys.num_controls());
  for (const auto& c : sys.controls()) out.push_back(drift_term(obs, c.hamiltonian, rho));
  return out;
}

double target_coupling_norm(const QuantumSystem& sys, const TargetSpec& target, std::size_t k) {
  const auto& h = sys.control(k).hamiltonian;
  double sq = 0.0;
  for (int j = 0; j < sys.dim(); ++j) {
    if (j != target.level) sq += std::norm(h(j, target.level));
  }
  return std::sqrt(sq);
}

double tk_amplitude_bound(const LyapunovObservable& obs, const QuantumSystem& sys, std::size_t k) {
  return obs.gap() * target_coupling_norm(sys, obs.target(), k);
}

double standard_gain(double gap, double coupling_norm, double strength) {
  if (strength == 0.0) return 0.0;
  if (!(gap * coupling_norm > 0.0)) {
    throw ValidationError("standard_gain: control does not couple to the target level");
  }
  return strength / (gap * coupling_norm);
}

double standard_gain(const LyapunovObservable& obs, const QuantumSystem& sys, std::size_t k) {
  return standard_gain(obs.gap(), target_coupling_norm(sys, obs.target(), k),
                       sys.control(k).max_strength);
}

double bang_bang_dominance_gap(AbbFamily family, double beta, double hardness,
                               double coupling_norm) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ValidationError(fmt::format("bang_bang_dominance_gap: beta must be in (0,1), got {}", beta));
  }
  if (!(hardness > 0.0)) throw ValidationError("bang_bang_dominance_gap: hardness must be positive");
  if (!(coupling_norm > 0.0)) throw ValidationError("bang_bang_dominance_gap: zero coupling norm");
  // |T| at which the law reaches beta * S, divided by ||R_k||.
  switch (family) {
    case AbbFamily::sigmoid:
      return std::log((1.0 + beta) / (1.0 - beta)) / (hardness * coupling_norm);
    case AbbFamily::rational:
      return beta * hardness / ((1.0 - beta) * coupling_norm);
  }
  return 0.0;
}

std::vector<double> ExcitationSchedule::controls_at(double t) const {
  std::vector<double> u(amplitudes.size(), 0.0);
  if (t < 0.0 || t > duration) return u;
  const double s = std::sin(omega * t);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = amplitudes[k] * s;
  return u;
}

DensityMatrix apply_excitation(const QuantumSystem& sys, const ExcitationSchedule& schedule,
                               const DensityMatrix& rho0, double dt) {
  DensityMatrix rho = rho0;
  double t = 0.0;
  while (t < schedule.duration - 1e-15) {
    const double h = std::min(dt, schedule.duration - t);
    const auto u = schedule.controls_at(t);
    rho = propagate_unchecked(matrix_exp_skewh(sys.hamiltonian(u), h), rho);
    t += h;
  }
  return DensityMatrix(rho.matrix());
}

ExcitationSchedule initial_excitation(const QuantumSystem& sys, const TargetSpec& target,
                                      const DensityMatrix& rho0,
                                      std::optional<std::vector<double>> strengths,
                                      std::optional<int> level, std::optional<double> duration,
                                      double verify_dt) {
  const int n = sys.dim();
  target.validate(n);
  if (rho0.dim() != n) throw ValidationError("initial_excitation: dimension mismatch");
  const DensityMatrix rho_f = target.state(n);
  if (std::abs(fidelity(rho0, rho_f)) > kZeroPopulation) {
    throw ValidationError(
        "initial_excitation: initial state already overlaps the target; no excitation needed");
  }

  int j = -1;
  if (level) {
    j = *level;
    if (j < 0 || j >= n || j == target.level) {
      throw ValidationError("initial_excitation: excitation level must differ from the target");
    }
    if (!(rho0.population(j) > kZeroPopulation)) {
      throw ValidationError(
          fmt::format("initial_excitation: level {} has zero population", j + 1));
    }
  } else {
    for (int cand = 0; cand < n; ++cand) {
      if (cand != target.level && rho0.population(cand) > 1e-6) {
        j = cand;
        break;
      }
    }
    if (j < 0) throw ValidationError("initial_excitation: no populated level found");
  }

  ExcitationSchedule schedule;
  schedule.level = j;
  schedule.omega = sys.energy(j) - sys.energy(target.level);
  if (schedule.omega == 0.0) {
    throw ValidationError("initial_excitation: degenerate transition frequency");
  }
  if (strengths) {
    if (strengths->size() != sys.num_controls()) {
      throw ValidationError("initial_excitation: one strength per control channel expected");
    }
    schedule.amplitudes = *strengths;
  } else {
    for (const auto& c : sys.controls()) schedule.amplitudes.push_back(c.max_strength);
  }
  schedule.duration =
      duration.value_or(0.1 * 2.0 * std::numbers::pi / std::abs(schedule.omega));
  if (!(schedule.duration > 0.0)) {
    throw ValidationError("initial_excitation: duration must be positive");
  }

  for (int attempt = 0; attempt <= 8; ++attempt) {
    const double step = std::min(verify_dt, schedule.duration / 16.0);
    const DensityMatrix end = apply_excitation(sys, schedule, rho0, step);
    if (fidelity(end, rho_f) > kZeroPopulation) return schedule;
    schedule.duration *= 2.0;
  }
  throw NumericalError("initial_excitation: target population still zero after 8 doublings");
}

}  // namespace qlyap
