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


#include "qlyap/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qlyap/invariant_set.hpp"
#include "qlyap/oscillation_scan.hpp"
#include "qlyap/output.hpp"

namespace qlyap {

namespace {

namespace fs = std::filesystem;

std::string fmt_time(const std::optional<double>& t) {
  return t ? fmt::format("{:.6g}", *t) : std::string("none");
}

std::string csv_time(const std::optional<double>& t) {
  return t ? format_number(*t) : std::string();
}

std::vector<double> max_abs_u(const Trajectory& traj) {
  std::vector<double> out;
  for (const auto& s : traj.samples) {
    out.resize(std::max(out.size(), s.u.size()), 0.0);
    for (std::size_t k = 0; k < s.u.size(); ++k) out[k] = std::max(out[k], std::abs(s.u[k]));
  }
  return out;
}

void write_svgs(const fs::path& out_dir, const std::string& stem, const Trajectory& traj,
                std::size_t m) {
  Series fid{"fidelity", {}, {}};
  Series v{"V", {}, {}};
  std::vector<Series> u(m);
  for (std::size_t k = 0; k < m; ++k) u[k].name = fmt::format("u_{}", k + 1);
  for (const auto& s : traj.samples) {
    fid.x.push_back(s.t);
    fid.y.push_back(s.fidelity);
    v.x.push_back(s.t);
    v.y.push_back(s.v);
    for (std::size_t k = 0; k < m; ++k) {
      u[k].x.push_back(s.t);
      u[k].y.push_back(s.u[k]);
    }
  }
  write_file_atomic(out_dir / (stem + "_fidelity.svg"), svg_line_chart(stem + ": fidelity", "t", {fid}));
  write_file_atomic(out_dir / (stem + "_V.svg"), svg_line_chart(stem + ": V", "t", {v}));
  write_file_atomic(out_dir / (stem + "_u.svg"), svg_line_chart(stem + ": controls", "t", u));
}

// "gamma_2" -> ("gamma", {1}); "gamma" -> ("gamma", every channel).
std::string split_channel(const std::string& name, std::size_t m, std::vector<std::size_t>& channels) {
  channels.clear();
  const auto us = name.rfind('_');
  if (us != std::string::npos && us + 1 < name.size() &&
      name.find_first_not_of("0123456789", us + 1) == std::string::npos) {
    const auto k = std::stoul(name.substr(us + 1));
    if (k < 1 || k > m) {
      throw ValidationError(fmt::format("sweep: channel {} out of range 1..{}", k, m));
    }
    channels.push_back(k - 1);
    return name.substr(0, us);
  }
  for (std::size_t k = 0; k < m; ++k) channels.push_back(k);
  return name;
}

}  // namespace

int resolve_workers(std::optional<int> requested) {
  if (const char* env = std::getenv("QLYAP_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
      throw ValidationError(fmt::format("QLYAP_WORKERS: expected a positive integer, got '{}'", env));
    }
    return static_cast<int>(v);
  }
  if (requested) {
    if (*requested < 1) throw ValidationError("--workers: must be >= 1");
    return *requested;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Trajectory simulate(const Scenario& sc) {
  return run(sc.system, sc.target, sc.observable(), sc.controller, sc.initial, sc.sim);
}

std::string summarize(const Scenario& sc, const Trajectory& traj) {
  const auto& last = traj.final_sample();
  std::string s = fmt::format("scenario: {}\nlaw: {}\n", sc.name, to_string(sc.controller.family));
  s += fmt::format("final t = {:.6g}, fidelity = {:.9f}, V = {:.9f}\n", last.t, last.fidelity, last.v);
  for (const auto& c : traj.crossings) {
    s += fmt::format("time to fidelity {}: {}\n", c.threshold, fmt_time(c.time));
  }
  const auto umax = max_abs_u(traj);
  for (std::size_t k = 0; k < umax.size(); ++k) s += fmt::format("max |u_{}| = {:.6g}\n", k + 1, umax[k]);
  if (traj.excitation_end) s += fmt::format("excitation until t = {:.6g}\n", *traj.excitation_end);
  s += fmt::format("zero points: {}\n", traj.num_zero_points);
  for (const auto& smp : traj.samples) {
    if (smp.flags & flags::switched) {
      s += fmt::format("switched at t = {:.6g}\n", smp.t);
      break;
    }
  }
  s += fmt::format("chattering: {}\n",
                   traj.chattering_onset ? fmt::format("yes, from t = {:.6g}", *traj.chattering_onset)
                                         : std::string("no"));
  if (traj.has_flag(flags::invariant_stall)) s += "invariant_stall: yes\n";
  s += fmt::format("max spectrum drift: {:.3e}\n", traj.max_spectrum_drift);
  for (const auto& w : traj.warnings) s += fmt::format("warning: {}\n", w);
  return s;
}

Scenario with_parameter(Scenario sc, const std::string& name, double value) {
  if (!std::isfinite(value)) throw ValidationError(fmt::format("sweep: value {} is not finite", value));
  if (name == "dt") {
    sc.sim.dt = value;
    sc.sim.validate();
    return sc;
  }
  const auto obs = sc.observable();
  const std::size_t m = sc.system.num_controls();
  std::vector<std::size_t> channels;
  const std::string base = split_channel(name, m, channels);
  const bool derived_gains = sc.controller.gains.empty();
  ControllerConfig resolved = resolve_config(sc.controller, sc.system, obs);
  std::vector<double>* list = nullptr;
  if (base == "gamma") {
    list = &resolved.gamma;
  } else if (base == "eta") {
    list = &resolved.eta;
  } else if (base == "S") {
    list = &resolved.strengths;
  } else if (base == "K") {
    list = &resolved.gains;
  } else {
    throw ValidationError(fmt::format(
        "sweep: unknown parameter '{}' (expected gamma, eta, S, K with optional _k, or dt)", name));
  }
  for (std::size_t k : channels) {
    if (k >= list->size()) {
      throw ValidationError(fmt::format("sweep: parameter '{}' does not apply to the {} law", name,
                                        to_string(resolved.family)));
    }
    (*list)[k] = value;
  }
  // Gains derived from the strengths follow a strength change.
  if (base == "S" && derived_gains) resolved.gains.clear();
  sc.controller = resolve_config(resolved, sc.system, obs);
  return sc;
}

std::vector<RobustnessResult> robustness_study(const Scenario& sc,
                                               const std::vector<double>& epsilons, int seeds,
                                               std::uint64_t base_seed, int workers) {
  if (epsilons.empty()) throw ValidationError("robustness: epsilon list is empty");
  if (seeds < 1) throw ValidationError("robustness: seeds must be >= 1");
  const auto obs = sc.observable();
  const DensityMatrix rho_f = sc.target.state(sc.system.dim());
  const std::size_t n = epsilons.size() * static_cast<std::size_t>(seeds);
  return parallel_map<RobustnessResult>(n, workers, [&](std::size_t i) {
    RobustnessResult r;
    r.epsilon = epsilons[i / static_cast<std::size_t>(seeds)];
    r.seed = base_seed + i % static_cast<std::size_t>(seeds);
    const auto pert = sample_perturbation(sc.system, sc.target, r.epsilon, r.seed);
    r.run = paired_run(sc.system, sc.target, pert, sc.controller, obs, sc.initial, sc.sim);
    r.bound = check_bound(r.run.times, r.run.distance, r.epsilon);
    r.final_distance = r.run.distance.back();
    r.final_target_distance =
        spectral_norm(r.run.perturbed.final_sample().rho.matrix() - rho_f.matrix());
    return r;
  });
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ValidationError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const NumericalError& e) {
    fmt::print(err, "numerical error: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNumerical;
  }
}

int cmd_simulate(const fs::path& path, const CommandOptions& opts, std::ostream& out) {
  const Scenario sc = load_scenario(path);
  const Trajectory traj = simulate(sc);
  const std::size_t m = sc.system.num_controls();
  const fs::path csv = opts.out_dir / sc.output.trajectory;
  write_file_atomic(csv, trajectory_csv(traj, m));
  if (opts.svg || sc.output.svg) write_svgs(opts.out_dir, sc.name, traj, m);
  out << summarize(sc, traj);
  fmt::print(out, "trajectory: {}\n", csv.string());
  return kExitOk;
}

int cmd_compare(const std::vector<fs::path>& paths, const CommandOptions& opts, std::ostream& out) {
  if (paths.empty()) throw ValidationError("compare: no scenarios given");
  std::vector<Scenario> scs;
  for (const auto& p : paths) scs.push_back(load_scenario(p));
  for (std::size_t i = 1; i < scs.size(); ++i) {
    if (!(scs[i].system == scs[0].system) || !(scs[i].target == scs[0].target)) {
      throw ValidationError(fmt::format("compare: scenario '{}' uses a different system or target "
                                        "than '{}'",
                                        scs[i].name, scs[0].name));
    }
  }
  const auto trajs = parallel_map<Trajectory>(scs.size(), resolve_workers(opts.workers),
                                              [&](std::size_t i) { return simulate(scs[i]); });
  const std::size_t m = scs[0].system.num_controls();
  std::string csv = "law," + trajectory_csv_header(m) + "\n";
  for (std::size_t i = 0; i < scs.size(); ++i) {
    const std::string body = trajectory_csv(trajs[i], m);
    std::istringstream lines(body);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) csv += scs[i].name + "," + line + "\n";
  }
  write_file_atomic(opts.out_dir / "compare.csv", csv);

  std::vector<double> thresholds = scs[0].sim.fidelity_targets;
  for (double th : thresholds) {
    std::vector<std::size_t> order(scs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto ta = crossing_time(trajs[a], th);
      const auto tb = crossing_time(trajs[b], th);
      if (ta && tb) return *ta < *tb;
      return ta.has_value() && !tb.has_value();
    });
    fmt::print(out, "ranking at fidelity {}:\n", th);
    for (std::size_t r = 0; r < order.size(); ++r) {
      fmt::print(out, "  {}. {} ({}) t = {}\n", r + 1, scs[order[r]].name,
                 to_string(scs[order[r]].controller.family), fmt_time(crossing_time(trajs[order[r]], th)));
    }
  }
  if (opts.svg) {
    std::vector<Series> series;
    for (std::size_t i = 0; i < scs.size(); ++i) {
      Series s{scs[i].name, {}, {}};
      for (const auto& smp : trajs[i].samples) {
        s.x.push_back(smp.t);
        s.y.push_back(smp.fidelity);
      }
      series.push_back(std::move(s));
    }
    write_file_atomic(opts.out_dir / "compare_fidelity.svg",
                      svg_line_chart("fidelity", "t", series));
  }
  fmt::print(out, "merged trajectories: {}\n", (opts.out_dir / "compare.csv").string());
  return kExitOk;
}

int cmd_sweep(const fs::path& path, const std::string& param, const std::vector<double>& values,
              const CommandOptions& opts, std::ostream& out) {
  if (values.empty()) throw ValidationError("sweep: value list is empty");
  const Scenario base = load_scenario(path);
  std::vector<Scenario> variants;
  for (double v : values) variants.push_back(with_parameter(base, param, v));
  const auto trajs = parallel_map<Trajectory>(variants.size(), resolve_workers(opts.workers),
                                              [&](std::size_t i) { return simulate(variants[i]); });
  const auto& ths = base.sim.fidelity_targets;
  std::string csv = "param,value";
  for (double th : ths) csv += fmt::format(",t_{}", th);
  csv += ",final_fidelity,chattering_onset\n";
  fmt::print(out, "{:>12}", param);
  for (double th : ths) fmt::print(out, " {:>14}", fmt::format("t({})", th));
  fmt::print(out, " {:>14}\n", "final F");
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv += fmt::format("{},{}", param, format_number(values[i]));
    fmt::print(out, "{:>12.6g}", values[i]);
    for (double th : ths) {
      const auto t = crossing_time(trajs[i], th);
      csv += "," + csv_time(t);
      fmt::print(out, " {:>14}", fmt_time(t));
    }
    csv += fmt::format(",{},{}\n", format_number(trajs[i].final_sample().fidelity),
                       csv_time(trajs[i].chattering_onset));
    fmt::print(out, " {:>14.9f}\n", trajs[i].final_sample().fidelity);
  }
  const fs::path file = opts.out_dir / fmt::format("sweep_{}.csv", param);
  write_file_atomic(file, csv);
  fmt::print(out, "sweep table: {}\n", file.string());
  return kExitOk;
}

int cmd_robustness(const fs::path& path, const std::vector<double>& epsilons_in,
                   std::optional<int> seeds_in, std::optional<double> xi,
                   const CommandOptions& opts, std::ostream& out) {
  const Scenario sc = load_scenario(path);
  const PerturbationParams defaults = sc.perturbation.value_or(PerturbationParams{});
  std::vector<double> epsilons = epsilons_in.empty() ? defaults.epsilons : epsilons_in;
  const int seeds = seeds_in.value_or(defaults.seeds);
  const std::uint64_t base_seed = opts.seed.value_or(defaults.base_seed);
  for (double e : epsilons) {
    if (!(e >= 0.0)) throw ValidationError(fmt::format("--epsilons: {} is negative", e));
  }

  std::optional<double> budget_eps;
  if (xi) {
    const Trajectory nominal = simulate(sc);
    const DensityMatrix rho_f = sc.target.state(sc.system.dim());
    const double xi1 = spectral_norm(nominal.final_sample().rho.matrix() - rho_f.matrix());
    budget_eps = epsilon_budget(nominal.final_sample().t, *xi, xi1);
    fmt::print(out, "budget: T = {:.6g}, xi = {}, xi1 = {:.6g} -> epsilon = {:.6g}\n",
               nominal.final_sample().t, *xi, xi1, *budget_eps);
    epsilons.push_back(*budget_eps);
  }

  const auto results = robustness_study(sc, epsilons, seeds, base_seed, resolve_workers(opts.workers));
  std::string csv = "seed,epsilon,t,distance,bound,margin\n";
  std::string summary = "seed,epsilon,min_margin,t_at_min,final_distance,final_target_distance,ok\n";
  bool all_ok = true;
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.run.times.size(); ++i) {
      const double b = distance_bound(r.run.times[i], r.epsilon);
      csv += fmt::format("{},{},{},{},{},{}\n", r.seed, format_number(r.epsilon),
                         format_number(r.run.times[i]), format_number(r.run.distance[i]),
                         format_number(b), format_number(b - r.run.distance[i]));
    }
    bool ok = r.bound.satisfied;
    if (budget_eps && r.epsilon == *budget_eps && r.final_target_distance > *xi + kBoundSlack) ok = false;
    all_ok = all_ok && ok;
    summary += fmt::format("{},{},{},{},{},{},{}\n", r.seed, format_number(r.epsilon),
                           format_number(r.bound.min_margin), format_number(r.bound.t_at_min),
                           format_number(r.final_distance), format_number(r.final_target_distance),
                           ok ? "true" : "false");
  }
  write_file_atomic(opts.out_dir / "robustness.csv", csv);
  write_file_atomic(opts.out_dir / "robustness_summary.csv", summary);
  for (double e : epsilons) {
    double worst = std::numeric_limits<double>::infinity();
    double max_final = 0.0;
    for (const auto& r : results) {
      if (r.epsilon != e) continue;
      worst = std::min(worst, r.bound.min_margin);
      max_final = std::max(max_final, r.final_distance);
    }
    fmt::print(out, "epsilon {:.6g}: {} seeds, min margin {:.3e}, max final distance {:.3e}\n", e,
               seeds, worst, max_final);
  }
  fmt::print(out, "bound {}\n", all_ok ? "holds on every run" : "VIOLATED");
  return all_ok ? kExitOk : kExitBoundViolation;
}

int cmd_analyze(const fs::path& csv_path, const fs::path& scenario, const CommandOptions& opts,
                std::ostream& out) {
  (void)opts;
  const Scenario sc = load_scenario(scenario);
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("{}: cannot open trajectory", csv_path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  const std::size_t m = sc.system.num_controls();
  const auto rows = read_trajectory_csv(buf.str(), m);
  if (rows.empty()) throw ValidationError("analyze: trajectory has no rows");

  // The CSV keeps summaries only; the state is recomputed from the scenario.
  const Trajectory traj = simulate(sc);
  if (traj.samples.size() != rows.size() ||
      std::abs(traj.final_sample().t - rows.back().t) > 1e-9 * std::max(1.0, rows.back().t)) {
    throw ValidationError("analyze: trajectory does not come from this scenario");
  }
  const auto obs = sc.observable();
  const auto data = build_invariant_data(sc.system, obs);
  const auto rep = membership(data, sc.system, traj.initial_spectrum, traj.final_sample().rho);
  fmt::print(out, "final t = {:.6g}, fidelity = {:.9f}\n", rows.back().t, rows.back().fidelity);
  fmt::print(out, "membership: in_set = {}, residual_im = {:.3e}, residual_re = {:.3e}, "
                  "spectrum_match = {}\n",
             rep.in_set, rep.residual_im, rep.residual_re, rep.spectrum_match);
  const DensityMatrix rho_f = sc.target.state(sc.system.dim());
  const auto at_target = membership(data, sc.system, traj.initial_spectrum, rho_f);
  fmt::print(out, "target in invariant set: {}\n", at_target.in_set);

  if (std::abs(sc.initial.purity() - 1.0) < 1e-9 && check_conditions(sc.system, sc.target).ok()) {
    const auto iso = target_isolated(sc.system, obs, sc.target, sc.initial);
    fmt::print(out, "target isolated: {}\nE1 = {}\nE2 = {}\n", iso.isolated, iso.e1, iso.e2);
    if (!iso.enumerated_levels.empty()) {
      std::string lv;
      for (int l : iso.enumerated_levels) lv += fmt::format("{}rho_{}", lv.empty() ? "" : ", ", l + 1);
      fmt::print(out, "pure states of the invariant set: {{{}}}\n", lv);
    }
  }

  if (sc.system.dim() == 2 && sc.system.num_controls() == 1 && sc.target.level == 0) {
    const double s = resolve_config(sc.controller, sc.system, obs).strengths.at(0);
    const auto params = TwoLevelParams::from(sc.system, obs, s);
    std::optional<double> first;
    fmt::print(out, "oscillation condition at zero points (t, lhs, rhs, holds):\n");
    std::size_t printed = 0;
    for (const auto& smp : traj.samples) {
      if ((smp.flags & flags::zero_point) == 0) continue;
      const auto chk = evaluate_oscillation_condition(params, smp.rho);
      if (chk.holds && !first) first = smp.t;
      if (printed++ < 20) {
        fmt::print(out, "  {:.6f} {:.6g} {:.6g} {}\n", smp.t, chk.lhs, chk.rhs, chk.holds);
      }
    }
    if (printed > 20) fmt::print(out, "  ... {} more\n", printed - 20);
    fmt::print(out, "condition first holds at: {}\n", fmt_time(first));
  }
  return kExitOk;
}

}  // namespace qlyap
