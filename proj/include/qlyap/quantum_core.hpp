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

#ifndef QLYAP_QUANTUM_CORE_HPP
#define QLYAP_QUANTUM_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qlyap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Input that breaks a documented precondition (bad dimensions, non-Hermitian
/// Hamiltonians, malformed scenarios). The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that produced an unphysical result (NaN, loss of unitarity,
/// spectrum drift). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerances shared by every module. Read through numeric_policy(); tests
/// may override them with set_numeric_policy() before starting any runs.
struct NumericPolicy {
  double hermitian_tol = 1e-10;
  double trace_tol = 1e-10;
  double positivity_tol = 1e-10;
  double unitarity_tol = 1e-10;
  int max_dim = 64;
};

const NumericPolicy& numeric_policy();
void set_numeric_policy(const NumericPolicy& policy);

/// Largest entrywise |A - A^dagger|.
double hermitian_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol);
void require_square(const ComplexMatrix& a, const char* what);

/// Eigenvalues sorted nonincreasing.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> eigenvalues);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double sum() const;
  /// max_i |this_i - other_i|; sizes must agree.
  double max_deviation(const Spectrum& other) const;

 private:
  std::vector<double> values_;
};

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Throws ValidationError when any invariant fails.
  explicit DensityMatrix(ComplexMatrix m);

  /// |psi><psi| for a normalised copy of psi.
  static DensityMatrix pure(const ComplexVector& psi);
  /// |j><j| in the energy basis (0-based level).
  static DensityMatrix basis_state(int dim, int level);

  const ComplexMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  Complex operator()(int r, int c) const { return m_(r, c); }
  double population(int level) const { return m_(level, level).real(); }
  double purity() const;

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
  friend DensityMatrix propagate_unchecked(const ComplexMatrix&, const DensityMatrix&);

  ComplexMatrix m_;
};

/// U rho U^dagger with Hermitian symmetrisation and no eigenvalue check.
/// The simulator validates separately so it can compare against the initial
/// spectrum.
DensityMatrix propagate_unchecked(const ComplexMatrix& u, const DensityMatrix& rho);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(-i H t) for Hermitian H, built from the eigendecomposition of H.
ComplexMatrix matrix_exp_skewh(const ComplexMatrix& h, double t);

/// Cached eigendecomposition so that exp(-i H s) can be evaluated for many s.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const ComplexMatrix& h);
  ComplexMatrix at(double t) const;
  const RealVector& energies() const { return energies_; }

 private:
  RealVector energies_;
  ComplexMatrix basis_;
};

/// tr(rho rho_f).
double fidelity(const DensityMatrix& rho, const DensityMatrix& target);
double spectral_norm(const ComplexMatrix& a);
Spectrum spectrum(const ComplexMatrix& a);
inline Spectrum spectrum(const DensityMatrix& rho) { return spectrum(rho.matrix()); }

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qlyap

#endif  // QLYAP_QUANTUM_CORE_HPP
