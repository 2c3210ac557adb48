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

#include "qlyap/controllers.hpp"

#include <cmath>

#include <fmt/format.h>

namespace qlyap {

namespace {

bool uses_gains(Family f) { return f == Family::standard || f == Family::switch_bb_std; }

bool is_two_level_family(Family f) {
  return f == Family::switch_bb_std || f == Family::switch_var_strength;
}

void require_list(const std::vector<double>& values, std::size_t n, const char* name) {
  if (values.size() != n) {
    throw ValidationError(fmt::format("controller.{}: expected {} values, got {}", name, n,
                                      values.size()));
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(fmt::format("controller.{}: values must be positive and finite", name));
    }
  }
}

TwoLevelParams with_strength(TwoLevelParams params, double s) {
  params.strength = s;
  return params;
}

bool is_crossing(int sign, int last_sign) {
  return sign == 0 || (last_sign != 0 && sign != last_sign);
}

void clear_events(ControllerState& state) {
  state.zero_point = false;
  state.switched = false;
  state.invariant_stall = false;
}

}  // namespace

Family parse_family(std::string_view name) {
  if (name == "standard") return Family::standard;
  if (name == "bang_bang") return Family::bang_bang;
  if (name == "abb1") return Family::abb1;
  if (name == "abb2") return Family::abb2;
  if (name == "switch_bb_std") return Family::switch_bb_std;
  if (name == "switch_var_strength") return Family::switch_var_strength;
  throw ValidationError(fmt::format("controller.family: unknown family '{}'", name));
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::standard: return "standard";
    case Family::bang_bang: return "bang_bang";
    case Family::abb1: return "abb1";
    case Family::abb2: return "abb2";
    case Family::switch_bb_std: return "switch_bb_std";
    case Family::switch_var_strength: return "switch_var_strength";
  }
  return "unknown";
}

StrengthRule parse_strength_rule(std::string_view name) {
  if (name == "fixed_fraction") return StrengthRule::fixed_fraction;
  if (name == "coeff_varying") return StrengthRule::coeff_varying;
  throw ValidationError(fmt::format("controller.strength_rule: unknown rule '{}'", name));
}

std::string_view to_string(StrengthRule rule) {
  return rule == StrengthRule::fixed_fraction ? "fixed_fraction" : "coeff_varying";
}

int dead_zone_sign(double x, double tol) {
  if (x > tol) return 1;
  if (x < -tol) return -1;
  return 0;
}

void validate_config(const ControllerConfig& cfg, std::size_t num_controls) {
  if (!(cfg.zero_tol > 0.0)) throw ValidationError("controller.zero_tol: must be positive");
  const std::size_t m = is_two_level_family(cfg.family) ? 1 : num_controls;
  if (is_two_level_family(cfg.family) && num_controls != 1) {
    throw ValidationError("controller.family: switching laws need exactly one control channel");
  }
  if (cfg.family != Family::standard) require_list(cfg.strengths, m, "strengths");
  if (uses_gains(cfg.family)) require_list(cfg.gains, m, "gains");
  if (cfg.family == Family::abb1) require_list(cfg.gamma, m, "gamma");
  if (cfg.family == Family::abb2) require_list(cfg.eta, m, "eta");
  if (cfg.family == Family::switch_var_strength && !(cfg.mu > 0.0 && cfg.mu < 1.0)) {
    throw ValidationError(fmt::format("controller.mu: must lie in (0, 1), got {}", cfg.mu));
  }
  if (cfg.initial_strength && !(*cfg.initial_strength > 0.0)) {
    throw ValidationError("controller.initial_strength: must be positive");
  }
}

ControllerConfig resolve_config(ControllerConfig cfg, const QuantumSystem& sys,
                                const LyapunovObservable& obs) {
  const std::size_t m = sys.num_controls();
  if (cfg.strengths.empty()) {
    for (const auto& c : sys.controls()) cfg.strengths.push_back(c.max_strength);
  }
  if (cfg.gains.empty() && uses_gains(cfg.family) && cfg.strengths.size() == m) {
    for (std::size_t k = 0; k < m; ++k) {
      cfg.gains.push_back(standard_gain(obs.gap(), target_coupling_norm(sys, obs.target(), k),
                                        cfg.strengths[k]));
    }
  }
  validate_config(cfg, m);
  return cfg;
}

std::vector<double> eval_standard(const ControllerConfig& cfg, std::span<const double> tk) {
  std::vector<double> u(tk.size());
  for (std::size_t k = 0; k < tk.size(); ++k) u[k] = -cfg.gains.at(k) * tk[k];
  return u;
}

std::vector<double> eval_bang_bang(const ControllerConfig& cfg, std::span<const double> tk) {
  std::vector<double> u(tk.size());
  for (std::size_t k = 0; k < tk.size(); ++k) {
    u[k] = -cfg.strengths.at(k) * dead_zone_sign(tk[k], cfg.zero_tol);
  }
  return u;
}

std::vector<double> eval_abb1(const ControllerConfig& cfg, std::span<const double> tk) {
  std::vector<double> u(tk.size());
  for (std::size_t k = 0; k < tk.size(); ++k) {
    // 2S / (1 + e^{gT}) - S == -S tanh(gT / 2); tanh saturates without overflow.
    u[k] = -cfg.strengths.at(k) * std::tanh(0.5 * cfg.gamma.at(k) * tk[k]);
  }
  return u;
}

std::vector<double> eval_abb2(const ControllerConfig& cfg, std::span<const double> tk) {
  std::vector<double> u(tk.size());
  for (std::size_t k = 0; k < tk.size(); ++k) {
    u[k] = -cfg.strengths.at(k) * tk[k] / (std::abs(tk[k]) + cfg.eta.at(k));
  }
  return u;
}

double reduced_strength(const ControllerConfig& cfg, const TwoLevelParams& params,
                        const DensityMatrix& rho) {
  const double imbalance = rho.population(0) - rho.population(1);
  const double coherence = std::abs(rho(0, 1));
  if (!(imbalance > 0.0) || !(coherence > 0.0)) {
    throw ValidationError("reduced_strength: state does not satisfy the chattering condition");
  }
  const double denom = std::abs(params.r) * imbalance;
  switch (cfg.strength_rule) {
    case StrengthRule::fixed_fraction:
      return cfg.mu * params.omega12 * coherence / denom;
    case StrengthRule::coeff_varying:
      return 2.0 * cfg.mu * params.omega12 * coherence * coherence / denom;
  }
  return params.strength;
}

SwitchingOutput eval_switching(const ControllerConfig& cfg, ControllerState state,
                               const TwoLevelParams& params, const DensityMatrix& rho, double t1) {
  clear_events(state);
  const int s = dead_zone_sign(t1, cfg.zero_tol);
  const double gain = cfg.gains.at(0);
  if (state.mode == Mode::standard) {
    if (s != 0) state.last_sign = s;
    return {-gain * t1, state};
  }
  // A zero point is either |T_1| inside the dead zone (located by the
  // simulator, or T_1(0) = 0) or a sign flip that skipped the dead zone.
  if (is_crossing(s, state.last_sign)) {
    state.zero_point = (s == 0);
    const auto check = evaluate_oscillation_condition(with_strength(params, state.strength), rho);
    state.invariant_stall = check.invariant_stall;
    if (check.holds) {
      state.mode = Mode::standard;
      state.switched = true;
      if (s != 0) state.last_sign = s;
      return {-gain * t1, state};
    }
  }
  if (s != 0) state.last_sign = s;
  return {-state.strength * s, state};
}

SwitchingOutput eval_var_strength(const ControllerConfig& cfg, ControllerState state,
                                  const TwoLevelParams& params, const DensityMatrix& rho,
                                  double t1) {
  clear_events(state);
  const int s = dead_zone_sign(t1, cfg.zero_tol);
  if (is_crossing(s, state.last_sign)) {
    state.zero_point = (s == 0);
    const auto check = evaluate_oscillation_condition(with_strength(params, state.strength), rho);
    state.invariant_stall = check.invariant_stall;
    if (check.holds) {
      const double next = reduced_strength(cfg, params, rho);
      if (oscillation_condition(with_strength(params, next), rho)) {
        throw NumericalError(fmt::format(
            "eval_var_strength: reduced strength {} still satisfies the chattering condition", next));
      }
      state.strength = next;
      state.switched = true;
    }
  }
  if (s != 0) state.last_sign = s;
  return {-state.strength * s, state};
}

Controller::Controller(ControllerConfig cfg, const QuantumSystem& sys,
                       const LyapunovObservable& obs)
    : cfg_(resolve_config(std::move(cfg), sys, obs)) {
  if (obs.dim() != sys.dim()) throw ValidationError("Controller: P and system dimensions differ");
  if (is_two_level_family(cfg_.family)) {
    const double s = cfg_.initial_strength.value_or(cfg_.strengths.at(0));
    two_level_ = TwoLevelParams::from(sys, obs, s);
    initial_state_.strength = s;
  }
  state_ = initial_state_;
}

void Controller::reset() { state_ = initial_state_; }

bool Controller::is_sign_based() const {
  return cfg_.family == Family::bang_bang || is_two_level_family(cfg_.family);
}

std::vector<double> Controller::evaluate(std::span<const double> tk, const DensityMatrix& rho) {
  switch (cfg_.family) {
    case Family::standard:
      return eval_standard(cfg_, tk);
    case Family::abb1:
      return eval_abb1(cfg_, tk);
    case Family::abb2:
      return eval_abb2(cfg_, tk);
    case Family::bang_bang:
      return eval_bang_bang(cfg_, tk);
    case Family::switch_bb_std: {
      auto out = eval_switching(cfg_, state_, *two_level_, rho, tk[0]);
      state_ = out.state;
      return {out.u};
    }
    case Family::switch_var_strength: {
      auto out = eval_var_strength(cfg_, state_, *two_level_, rho, tk[0]);
      state_ = out.state;
      return {out.u};
    }
  }
  return {};
}

std::string_view Controller::mode_tag() const {
  switch (cfg_.family) {
    case Family::switch_bb_std:
      return state_.mode == Mode::standard ? "standard" : "bang_bang";
    case Family::switch_var_strength:
      return "bang_bang";
    default:
      return to_string(cfg_.family);
  }
}

}  // namespace qlyap
