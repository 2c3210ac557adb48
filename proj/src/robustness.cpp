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


#include "qlyap/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace qlyap {

namespace {

constexpr int kMaxResamples = 16;

// Uniform on [-1, 1) from the top 53 bits; avoids the library-defined
// distribution algorithms so draws match across standard libraries.
double draw(std::mt19937_64& gen) {
  const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

PerturbationSpec draw_raw(const QuantumSystem& sys, std::mt19937_64& gen) {
  const int n = sys.dim();
  PerturbationSpec pert;
  for (int j = 0; j < n; ++j) pert.dh0.push_back(draw(gen));
  for (std::size_t k = 0; k < sys.num_controls(); ++k) {
    ComplexMatrix a(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const double re = draw(gen);
        const double im = draw(gen);
        a(r, c) = Complex(re, im);
      }
    }
    pert.dhk.push_back(0.5 * (a + a.adjoint()));
  }
  return pert;
}

}  // namespace

double PerturbationSpec::budget(const QuantumSystem& sys) const {
  double b = 0.0;
  for (double d : dh0) b = std::max(b, std::abs(d));
  for (std::size_t k = 0; k < dhk.size(); ++k) {
    b += sys.control(k).max_strength * spectral_norm(dhk[k]);
  }
  return b;
}

QuantumSystem PerturbationSpec::apply(const QuantumSystem& sys) const {
  if (dh0.size() != static_cast<std::size_t>(sys.dim()) || dhk.size() != sys.num_controls()) {
    throw ValidationError("perturbation: shape does not match the system");
  }
  std::vector<double> h0 = sys.h0_diag();
  for (std::size_t j = 0; j < h0.size(); ++j) h0[j] += dh0[j];
  auto controls = sys.controls();
  for (std::size_t k = 0; k < controls.size(); ++k) controls[k].hamiltonian += dhk[k];
  return QuantumSystem(std::move(h0), std::move(controls), sys.unit());
}

PerturbationSpec sample_perturbation(const QuantumSystem& sys, const TargetSpec& target,
                                     double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("perturbation.epsilon: must be a finite value >= 0");
  }
  std::mt19937_64 gen(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    PerturbationSpec pert = draw_raw(sys, gen);
    pert.epsilon = epsilon;
    pert.seed = seed;
    const double raw = pert.budget(sys);
    const double scale = raw > 0.0 ? epsilon / raw : 0.0;
    for (double& d : pert.dh0) d *= scale;
    for (auto& m : pert.dhk) m *= scale;
    if (epsilon == 0.0 || check_conditions(pert.apply(sys), target).ok()) return pert;
  }
  throw ValidationError(fmt::format(
      "perturbation: epsilon = {} breaks the structural conditions on {} consecutive samples",
      epsilon, kMaxResamples));
}

std::vector<DensityMatrix> replay(const QuantumSystem& sys,
                                  const std::vector<ControlSegment>& schedule,
                                  const DensityMatrix& rho0,
                                  const std::vector<std::size_t>& checkpoints) {
  std::vector<DensityMatrix> out;
  out.reserve(checkpoints.size());
  DensityMatrix rho = rho0;
  std::size_t applied = 0;
  for (std::size_t cp : checkpoints) {
    if (cp < applied || cp > schedule.size()) {
      throw ValidationError("replay: checkpoints must be nondecreasing and within the schedule");
    }
    for (; applied < cp; ++applied) {
      const auto& seg = schedule[applied];
      rho = propagate_unchecked(HermitianPropagator(sys.hamiltonian(seg.u)).at(seg.duration), rho);
    }
    out.push_back(rho);
  }
  return out;
}

PairedRun paired_run(const QuantumSystem& sys, const TargetSpec& target,
                     const PerturbationSpec& perturbation, const ControllerConfig& controller,
                     const LyapunovObservable& obs, const DensityMatrix& rho0,
                     const SimConfig& cfg) {
  PairedRun out;
  out.nominal = run(sys, target, obs, controller, rho0, cfg);
  const QuantumSystem shifted = perturbation.apply(sys);
  const DensityMatrix rho_f = target.state(sys.dim());

  std::vector<std::size_t> checkpoints;
  for (const auto& s : out.nominal.samples) checkpoints.push_back(s.segments_applied);
  const auto states = replay(shifted, out.nominal.schedule, rho0, checkpoints);

  out.perturbed.initial_spectrum = out.nominal.initial_spectrum;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& nom = out.nominal.samples[i];
    Sample s{nom.t, states[i], nom.u, {}, lyapunov_value(obs, states[i]),
             fidelity(states[i], rho_f), nom.mode, 0, nom.segments_applied};
    out.perturbed.samples.push_back(std::move(s));
    out.times.push_back(nom.t);
    out.distance.push_back(spectral_norm(states[i].matrix() - nom.rho.matrix()));
  }
  out.perturbed.schedule = out.nominal.schedule;
  return out;
}

double distance_bound(double t, double epsilon) {
  return std::min(std::expm1(2.0 * t * epsilon), 2.0);
}

BoundReport check_bound(const std::vector<double>& times, const std::vector<double>& distance,
                        double epsilon) {
  if (times.size() != distance.size()) throw ValidationError("check_bound: series lengths differ");
  BoundReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double margin = distance_bound(times[i], epsilon) - distance[i];
    rep.max_distance = std::max(rep.max_distance, distance[i]);
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.t_at_min = times[i];
    }
  }
  if (times.empty()) rep.min_margin = 0.0;
  rep.satisfied = rep.min_margin >= -kBoundSlack;
  return rep;
}

double epsilon_budget(double horizon_t, double xi, double xi1) {
  if (!(horizon_t > 0.0)) throw ValidationError("epsilon_budget: T must be positive");
  if (!(xi1 >= 0.0)) throw ValidationError("epsilon_budget: xi1 must be >= 0");
  if (xi < xi1) {
    throw ValidationError(fmt::format("epsilon_budget: xi = {} is below xi1 = {}", xi, xi1));
  }
  return std::log1p(xi - xi1) / (2.0 * horizon_t);
}

}  // namespace qlyap
