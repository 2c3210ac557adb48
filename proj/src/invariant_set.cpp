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


#include "qlyap/invariant_set.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace qlyap {

namespace {

double max_residual(const RealMatrix& a, const std::vector<RealVector>& vs) {
  double worst = 0.0;
  for (const auto& v : vs) worst = std::max(worst, (a * v).norm());
  return worst;
}

}  // namespace

InvariantSetData build_invariant_data(const QuantumSystem& sys, const LyapunovObservable& obs) {
  const int n = sys.dim();
  if (n < 2) throw ValidationError("invariant set: N >= 2 required");
  if (obs.dim() != n) throw ValidationError("invariant set: P and system dimensions differ");
  InvariantSetData d;
  d.fn = n * (n - 1) - 2;
  const int pairs = n * (n - 1) / 2;
  d.omega.resize(pairs);
  d.pdiff.resize(pairs);
  const auto& p = obs.diagonal();
  for (int j = 0, c = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l, ++c) {
      d.pair_order.emplace_back(j, l);
      d.omega(c) = sys.energy(j) - sys.energy(l);
      d.pdiff(c) = p[static_cast<std::size_t>(l)] - p[static_cast<std::size_t>(j)];
    }
  }
  // Dividing row n by w^n leaves the solution set of M x = 0 unchanged and
  // keeps the high powers bounded by 1.
  d.row_scale = std::max(1.0, d.omega.cwiseAbs().maxCoeff());
  const int rows = d.fn / 2 + 1;
  d.m.resize(rows, pairs);
  for (int c = 0; c < pairs; ++c) {
    const double w = d.omega(c) / d.row_scale;
    for (int r = 0; r < rows; ++r) d.m(r, c) = std::pow(w, 2 * r);
  }
  return d;
}

ComplexVector xi_vector(const QuantumSystem& sys, const DensityMatrix& rho, std::size_t k) {
  const int n = sys.dim();
  if (rho.dim() != n) throw ValidationError("xi_vector: dimension mismatch");
  const auto& hk = sys.control(k).hamiltonian;
  ComplexVector xi(n * (n - 1) / 2);
  for (int j = 0, c = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l, ++c) xi(c) = hk(j, l) * rho(l, j);
  }
  return xi;
}

MembershipReport membership(const InvariantSetData& data, const QuantumSystem& sys,
                            const Spectrum& rho0_spectrum, const DensityMatrix& rho_bar,
                            double tol) {
  if (!(tol > 0.0)) throw ValidationError("membership: tol must be positive");
  if (rho0_spectrum.size() != static_cast<std::size_t>(rho_bar.dim())) {
    throw ValidationError("membership: spectrum size differs from the state dimension");
  }
  std::vector<RealVector> im;
  std::vector<RealVector> re;
  for (std::size_t k = 0; k < sys.num_controls(); ++k) {
    const ComplexVector xi = xi_vector(sys, rho_bar, k);
    im.push_back(xi.imag());
    re.push_back(xi.real());
  }
  const RealMatrix mp = data.m * data.pdiff.asDiagonal();
  const RealMatrix mwp = data.m * data.omega.asDiagonal() * data.pdiff.asDiagonal();
  MembershipReport rep;
  rep.residual_im = max_residual(mp, im);
  rep.residual_re = max_residual(mwp, re);
  rep.spectrum_match = spectrum(rho_bar).max_deviation(rho0_spectrum) <= tol;
  rep.in_set = rep.spectrum_match && rep.residual_im <= tol && rep.residual_re <= tol;
  return rep;
}

MembershipReport membership(const QuantumSystem& sys, const LyapunovObservable& obs,
                            const Spectrum& rho0_spectrum, const DensityMatrix& rho_bar,
                            double tol) {
  return membership(build_invariant_data(sys, obs), sys, rho0_spectrum, rho_bar, tol);
}

int target_pair_rank(const InvariantSetData& data, const TargetSpec& target) {
  std::vector<int> cols;
  for (std::size_t c = 0; c < data.pair_order.size(); ++c) {
    const auto [j, l] = data.pair_order[c];
    if (j == target.level || l == target.level) cols.push_back(static_cast<int>(c));
  }
  RealMatrix sub(data.m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = data.m.col(cols[i]);
  Eigen::JacobiSVD<RealMatrix> svd(sub);
  svd.setThreshold(1e-10);
  return static_cast<int>(svd.rank());
}

IsolationReport target_isolated(const QuantumSystem& sys, const LyapunovObservable& obs,
                                const TargetSpec& target, const DensityMatrix& rho0) {
  const int n = sys.dim();
  target.validate(n);
  if (obs.target() != target) throw ValidationError("target_isolated: P built for another target");
  if (rho0.dim() != n) throw ValidationError("target_isolated: dimension mismatch");
  if (const auto report = check_conditions(sys, target); !report.ok()) {
    throw ConditionError(report);
  }
  if (std::abs(rho0.purity() - 1.0) > 1e-9) {
    throw ValidationError("target_isolated: initial state must be pure");
  }
  const auto data = build_invariant_data(sys, obs);
  const int f = target.level + 1;
  IsolationReport rep;
  rep.isolated = target_pair_rank(data, target) == n - 1;
  rep.e1 = fmt::format("{{rho_f}} = {{|{0}><{0}|}}", f);
  rep.e2 = fmt::format(
      "pure states with zero row and column {0} (rho_{0}{0} = 0), spectrum (1, 0, ..., 0), "
      "satisfying the moment conditions on the remaining {1} levels",
      f, n - 1);
  if (n == 2) {
    const Spectrum s0 = spectrum(rho0);
    for (int lvl = 0; lvl < n; ++lvl) {
      auto candidate = DensityMatrix::basis_state(n, lvl);
      if (membership(data, sys, s0, candidate).in_set) {
        rep.enumerated.push_back(candidate);
        rep.enumerated_levels.push_back(lvl);
      }
    }
    // For N = 2 membership forces rho12 = 0, so the basis states exhaust the pure part.
  }
  return rep;
}

}  // namespace qlyap
