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

#ifndef QLYAP_CONTROLLERS_HPP
#define QLYAP_CONTROLLERS_HPP

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qlyap/lyapunov.hpp"
#include "qlyap/oscillation.hpp"

namespace qlyap {

enum class Family { standard, bang_bang, abb1, abb2, switch_bb_std, switch_var_strength };
enum class StrengthRule { fixed_fraction, coeff_varying };

Family parse_family(std::string_view name);
std::string_view to_string(Family family);
StrengthRule parse_strength_rule(std::string_view name);
std::string_view to_string(StrengthRule rule);

/// Parameters of one control law. Empty gain / strength lists are filled in by
/// resolve_config(): strengths default to the system's S_k and gains to the
/// saturation-safe value S_k / ((p - p_f) ||R_k||).
struct ControllerConfig {
  Family family = Family::standard;
  std::vector<double> gains;      // K_k
  std::vector<double> strengths;  // S_k
  std::vector<double> gamma;      // ABB-I hardness
  std::vector<double> eta;        // ABB-II hardness
  double mu = 0.9;                // variable-strength fraction, in (0, 1)
  StrengthRule strength_rule = StrengthRule::fixed_fraction;
  double zero_tol = 1e-9;
  /// Strength of the first bang-bang phase for the two switching families.
  std::optional<double> initial_strength;

  bool operator==(const ControllerConfig&) const = default;
};

ControllerConfig resolve_config(ControllerConfig cfg, const QuantumSystem& sys,
                                const LyapunovObservable& obs);
void validate_config(const ControllerConfig& cfg, std::size_t num_controls);

enum class Mode { bang_bang, standard };

struct ControllerState {
  Mode mode = Mode::bang_bang;
  double strength = 0.0;  // current bang-bang strength S(0~-)
  int last_sign = 0;      // sign of the last T_1 outside the dead zone

  // Events from the most recent evaluation.
  bool zero_point = false;
  bool switched = false;
  bool invariant_stall = false;

  bool operator==(const ControllerState&) const = default;
};

/// Sign with a dead zone: |x| <= tol counts as zero.
int dead_zone_sign(double x, double tol);

std::vector<double> eval_standard(const ControllerConfig& cfg, std::span<const double> tk);
std::vector<double> eval_bang_bang(const ControllerConfig& cfg, std::span<const double> tk);
std::vector<double> eval_abb1(const ControllerConfig& cfg, std::span<const double> tk);
std::vector<double> eval_abb2(const ControllerConfig& cfg, std::span<const double> tk);

struct SwitchingOutput {
  double u = 0.0;
  ControllerState state;
};

/// Bang-bang until the chattering condition holds at a zero point of T_1, then
/// the standard law for good.
SwitchingOutput eval_switching(const ControllerConfig& cfg, ControllerState state,
                               const TwoLevelParams& params, const DensityMatrix& rho, double t1);

/// Bang-bang whose strength is lowered at every zero point where the current
/// strength would chatter.
SwitchingOutput eval_var_strength(const ControllerConfig& cfg, ControllerState state,
                                  const TwoLevelParams& params, const DensityMatrix& rho,
                                  double t1);

/// New strength after a chattering zero point; guaranteed to fail the condition.
double reduced_strength(const ControllerConfig& cfg, const TwoLevelParams& params,
                        const DensityMatrix& rho);

/// A control law bound to one system, with its mutable state. One instance per run.
class Controller {
 public:
  Controller(ControllerConfig cfg, const QuantumSystem& sys, const LyapunovObservable& obs);

  std::vector<double> evaluate(std::span<const double> tk, const DensityMatrix& rho);
  void reset();

  const ControllerConfig& config() const { return cfg_; }
  const ControllerState& state() const { return state_; }
  std::string_view mode_tag() const;
  bool is_sign_based() const;

 private:
  ControllerConfig cfg_;
  std::optional<TwoLevelParams> two_level_;
  ControllerState state_;
  ControllerState initial_state_;
};

}  // namespace qlyap

#endif  // QLYAP_CONTROLLERS_HPP
