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

#include "qlyap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace qlyap {

namespace {

constexpr std::pair<unsigned, std::string_view> kFlagNames[] = {
    {flags::zero_point, "zero_point"},
    {flags::switched, "switched"},
    {flags::chattering, "chattering"},
    {flags::invariant_stall, "invariant_stall"},
    {flags::bisection_fallback, "bisection_fallback"},
    {flags::excitation, "excitation"},
};

// Past this the state is no longer trusted and the run aborts.
constexpr double kSpectrumAbort = 1e-6;
// Splits shorter than this fraction of dt are ignored so the loop always advances.
constexpr double kMinSplitFraction = 1e-12;
constexpr int kMaxSplitsPerStep = 64;

bool finite_matrix(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
  }
  return true;
}

struct Crossing {
  double tau = 0.0;
  bool fallback = false;
};

// Earliest point in (0, h) where some T_k, nonzero with opposite signs at the
// two ends, falls inside the dead zone.
std::optional<Crossing> locate_crossing(const LyapunovObservable& obs, const QuantumSystem& sys,
                                        const HermitianPropagator& prop, const DensityMatrix& rho,
                                        const std::vector<double>& t_start,
                                        const std::vector<double>& t_end, double h,
                                        const SimConfig& cfg) {
  std::optional<Crossing> best;
  for (std::size_t k = 0; k < t_start.size(); ++k) {
    const int s0 = dead_zone_sign(t_start[k], cfg.zero_tol);
    const int s1 = dead_zone_sign(t_end[k], cfg.zero_tol);
    if (s0 == 0 || s1 == 0 || s0 == s1) continue;
    const auto& hk = sys.control(k).hamiltonian;
    double lo = 0.0;
    double hi = h;
    Crossing found{h, true};
    for (int it = 0; it < cfg.max_bisection; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double tm = drift_term(obs, hk, propagate_unchecked(prop.at(mid), rho));
      const int sm = dead_zone_sign(tm, cfg.zero_tol);
      if (sm == 0) {
        found = {mid, false};
        break;
      }
      if (sm == s0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!best || found.tau < best->tau) best = found;
  }
  return best;
}

class Recorder {
 public:
  Recorder(Trajectory& traj, const DensityMatrix& target, const LyapunovObservable& obs)
      : traj_(traj), target_(target), obs_(obs) {}

  void track_thresholds(double t, double f) {
    for (auto& c : traj_.crossings) {
      if (c.time) continue;
      if (f >= c.threshold) {
        if (!have_prev_ || prev_f_ >= c.threshold) {
          c.time = t;
        } else {
          c.time = prev_t_ + (t - prev_t_) * (c.threshold - prev_f_) / (f - prev_f_);
        }
      }
    }
    prev_t_ = t;
    prev_f_ = f;
    have_prev_ = true;
  }

  void add(double t, const DensityMatrix& rho, std::vector<double> u, std::vector<double> tk,
           std::string mode, unsigned f) {
    Sample s{t,
             rho,
             std::move(u),
             std::move(tk),
             lyapunov_value(obs_, rho),
             fidelity(rho, target_),
             std::move(mode),
             f,
             traj_.schedule.size()};
    traj_.samples.push_back(std::move(s));
  }

 private:
  Trajectory& traj_;
  const DensityMatrix& target_;
  const LyapunovObservable& obs_;
  double prev_t_ = 0.0;
  double prev_f_ = 0.0;
  bool have_prev_ = false;
};

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sim.dt: must be positive");
  if (!(horizon > dt) || !std::isfinite(horizon)) {
    throw ValidationError("sim.horizon: must exceed dt");
  }
  if (record_stride < 1) throw ValidationError("sim.record_stride: must be >= 1");
  if (!(zero_tol > 0.0)) throw ValidationError("sim.zero_tol: must be positive");
  for (double th : fidelity_targets) {
    if (!(th > 0.0 && th <= 1.0)) {
      throw ValidationError(fmt::format("sim.fidelity_targets: {} is outside (0, 1]", th));
    }
  }
  if (chatter_window < 1) throw ValidationError("sim.chatter_window: must be >= 1");
  if (!(chatter_dwell > 0.0)) throw ValidationError("sim.chatter_dwell: must be positive");
  if (max_bisection < 1) throw ValidationError("sim.max_bisection: must be >= 1");
  if (!(spectrum_tol > 0.0)) throw ValidationError("sim.spectrum_tol: must be positive");
}

std::string flags_to_string(unsigned f) {
  std::string out;
  for (const auto& [bit, name] : kFlagNames) {
    if ((f & bit) == 0) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

unsigned parse_flags(std::string_view text) {
  unsigned f = 0;
  while (!text.empty()) {
    const auto bar = text.find('|');
    const auto token = text.substr(0, bar);
    bool known = false;
    for (const auto& [bit, name] : kFlagNames) {
      if (token == name) {
        f |= bit;
        known = true;
      }
    }
    if (!known) throw ValidationError(fmt::format("unknown flag '{}'", token));
    if (bar == std::string_view::npos) break;
    text.remove_prefix(bar + 1);
  }
  return f;
}

bool Trajectory::has_flag(unsigned f) const {
  return std::any_of(samples.begin(), samples.end(),
                     [f](const Sample& s) { return (s.flags & f) != 0; });
}

DensityMatrix step(const QuantumSystem& sys, const DensityMatrix& rho, std::span<const double> u,
                   double dt) {
  if (u.size() != sys.num_controls()) {
    throw ValidationError(fmt::format("step: expected {} controls, got {}", sys.num_controls(),
                                      u.size()));
  }
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (std::abs(u[k]) > sys.control(k).max_strength + 1e-12) {
      throw ValidationError(fmt::format("step: |u_{}| = {} exceeds S = {}", k + 1,
                                        std::abs(u[k]), sys.control(k).max_strength));
    }
  }
  if (!(dt >= 0.0)) throw ValidationError("step: dt must be nonnegative");
  if (dt == 0.0) return rho;
  const DensityMatrix next =
      propagate_unchecked(HermitianPropagator(sys.hamiltonian(u)).at(dt), rho);
  if (!finite_matrix(next.matrix())) throw NumericalError("step: non-finite state");
  const double drift = spectrum(next).max_deviation(spectrum(rho));
  if (drift > 1e-10) {
    throw NumericalError(fmt::format("step: spectrum drifted by {:.3e}", drift));
  }
  return next;
}

Trajectory run(const QuantumSystem& sys, const TargetSpec& target, const LyapunovObservable& obs,
               const ControllerConfig& controller, const DensityMatrix& rho0,
               const SimConfig& cfg) {
  cfg.validate();
  const int n = sys.dim();
  target.validate(n);
  if (rho0.dim() != n) throw ValidationError("run: initial state dimension differs from system");
  if (obs.dim() != n || obs.target() != target) {
    throw ValidationError("run: P does not match the system and target");
  }
  if (const auto report = check_conditions(sys, target); !report.ok()) {
    throw ConditionError(report);
  }

  Controller ctrl(controller, sys, obs);
  const DensityMatrix rho_f = target.state(n);
  const std::size_t m = sys.num_controls();

  Trajectory traj;
  traj.initial_spectrum = spectrum(rho0);
  for (double th : cfg.fidelity_targets) traj.crossings.push_back({th, std::nullopt});
  Recorder rec(traj, rho_f, obs);

  DensityMatrix rho = rho0;
  double t = 0.0;

  auto check_state = [&](double when) {
    if (!finite_matrix(rho.matrix())) {
      throw NumericalError(fmt::format("run: non-finite state at t = {}", when));
    }
    const double drift = spectrum(rho).max_deviation(traj.initial_spectrum);
    traj.max_spectrum_drift = std::max(traj.max_spectrum_drift, drift);
    if (drift > kSpectrumAbort) {
      throw NumericalError(
          fmt::format("run: spectrum drifted by {:.3e} at t = {}; aborting", drift, when));
    }
  };

  rec.track_thresholds(t, fidelity(rho, rho_f));

  if (cfg.auto_excitation && fidelity(rho0, rho_f) <= 1e-10) {
    const auto& resolved = ctrl.config();
    std::vector<double> amps;
    for (std::size_t k = 0; k < m; ++k) {
      amps.push_back(std::min(resolved.strengths.empty() ? sys.control(k).max_strength
                                                         : resolved.strengths[k],
                              sys.control(k).max_strength));
    }
    const auto plan = initial_excitation(sys, target, rho0, amps, std::nullopt, std::nullopt,
                                         cfg.dt);
    while (t < plan.duration - 1e-12 * cfg.dt) {
      const double h = std::min(cfg.dt, plan.duration - t);
      auto u = plan.controls_at(t);
      rec.add(t, rho, u, drift_terms(obs, sys, rho), "excitation", flags::excitation);
      traj.schedule.push_back({t, h, u});
      rho = propagate_unchecked(HermitianPropagator(sys.hamiltonian(u)).at(h), rho);
      t += h;
      check_state(t);
      rec.track_thresholds(t, fidelity(rho, rho_f));
    }
    traj.excitation_end = t;
  }

  const double t_feedback = t;
  const auto total_steps =
      static_cast<long long>(std::ceil((cfg.horizon - t_feedback) / cfg.dt - 1e-9));
  long long grid = 0;
  double next_grid = t_feedback + cfg.dt;
  unsigned pending = 0;  // flags carried to the next evaluation (after a split)
  std::vector<int> prev_sign;
  int splits_this_step = 0;
  int chatter_run = 0;
  double chatter_start = 0.0;
  std::optional<double> last_zero;
  bool warned_spectrum = false;
  const bool sign_based = ctrl.is_sign_based();

  while (grid < total_steps) {
    const auto tk = drift_terms(obs, sys, rho);
    const auto u = ctrl.evaluate(tk, rho);
    for (std::size_t k = 0; k < m; ++k) {
      if (!std::isfinite(u[k])) throw NumericalError("run: controller produced a non-finite value");
      if (std::abs(u[k]) > sys.control(k).max_strength + 1e-12) {
        throw ValidationError(fmt::format(
            "run: |u_{}| = {:.6g} exceeds S = {:.6g} at t = {:.6g}; lower the gain", k + 1,
            std::abs(u[k]), sys.control(k).max_strength, t));
      }
    }

    unsigned f = pending;
    pending = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const int s = dead_zone_sign(tk[k], cfg.zero_tol);
      if (s == 0 && (prev_sign.empty() || prev_sign[k] != 0)) f |= flags::zero_point;
    }
    prev_sign.resize(m);
    for (std::size_t k = 0; k < m; ++k) prev_sign[k] = dead_zone_sign(tk[k], cfg.zero_tol);
    const auto& st = ctrl.state();
    if (st.zero_point) f |= flags::zero_point;
    if (st.switched) f |= flags::switched;
    if (st.invariant_stall) f |= flags::invariant_stall;
    if (traj.chattering_onset) f |= flags::chattering;
    if (f & flags::zero_point) {
      ++traj.num_zero_points;
      if (sign_based && !traj.chattering_onset) {
        if (last_zero && t - *last_zero <= cfg.chatter_dwell * cfg.dt) {
          ++chatter_run;
        } else {
          chatter_run = 1;
          chatter_start = t;
        }
        last_zero = t;
        if (chatter_run >= cfg.chatter_window) {
          traj.chattering_onset = chatter_start;
          f |= flags::chattering;
        }
      }
    }

    const bool on_grid = splits_this_step == 0;
    if ((on_grid && grid % cfg.record_stride == 0) || (f & ~flags::chattering) != 0) {
      rec.add(t, rho, u, tk, std::string(ctrl.mode_tag()), f);
    }

    const double h = next_grid - t;
    const HermitianPropagator prop(sys.hamiltonian(u));
    DensityMatrix next = propagate_unchecked(prop.at(h), rho);
    const auto tk_next = drift_terms(obs, sys, next);

    std::optional<Crossing> cross;
    if (splits_this_step < kMaxSplitsPerStep) {
      cross = locate_crossing(obs, sys, prop, rho, tk, tk_next, h, cfg);
    }
    if (cross && cross->fallback) {
      pending |= flags::bisection_fallback;
      traj.warnings.push_back(
          fmt::format("zero crossing near t = {:.9g} not resolved; using the step boundary", t));
    }
    if (cross && !cross->fallback && cross->tau > kMinSplitFraction * cfg.dt &&
        cross->tau < h - kMinSplitFraction * cfg.dt) {
      traj.schedule.push_back({t, cross->tau, u});
      rho = propagate_unchecked(prop.at(cross->tau), rho);
      t += cross->tau;
      pending |= flags::zero_point;
      ++splits_this_step;
    } else {
      traj.schedule.push_back({t, h, u});
      rho = std::move(next);
      ++grid;
      t = next_grid;
      next_grid = t_feedback + static_cast<double>(grid + 1) * cfg.dt;

      splits_this_step = 0;
    }
    check_state(t);
    if (traj.max_spectrum_drift > cfg.spectrum_tol && !warned_spectrum) {
      warned_spectrum = true;
      traj.warnings.push_back(fmt::format("spectrum drift {:.3e} exceeded {:.1e} at t = {:.6g}",
                                          traj.max_spectrum_drift, cfg.spectrum_tol, t));
    }
    rec.track_thresholds(t, fidelity(rho, rho_f));
  }

  // Closing sample: the state at the horizon and the control that would follow.
  const auto tk = drift_terms(obs, sys, rho);
  const auto u = ctrl.evaluate(tk, rho);
  unsigned f = pending;
  if (traj.chattering_onset) f |= flags::chattering;
  if (ctrl.state().switched) f |= flags::switched;
  rec.add(t, rho, u, tk, std::string(ctrl.mode_tag()), f);
  return traj;
}

std::optional<double> time_to_fidelity(const Trajectory& traj, double threshold) {
  const auto& s = traj.samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].fidelity < threshold) continue;
    if (i == 0) return s[0].t;
    const double f0 = s[i - 1].fidelity;
    const double f1 = s[i].fidelity;
    return s[i - 1].t + (s[i].t - s[i - 1].t) * (threshold - f0) / (f1 - f0);
  }
  return std::nullopt;
}

std::optional<double> crossing_time(const Trajectory& traj, double threshold) {
  for (const auto& c : traj.crossings) {
    if (std::abs(c.threshold - threshold) < 1e-15) return c.time;
  }
  return time_to_fidelity(traj, threshold);
}

}  // namespace qlyap
