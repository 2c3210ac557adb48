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

#include "qlyap/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace qlyap {

namespace {

NumericPolicy& mutable_policy() {
  static NumericPolicy policy;
  return policy;
}

void require_hermitian(const ComplexMatrix& a, const char* what) {
  require_square(a, what);
  const double defect = hermitian_defect(a);
  if (!(defect <= numeric_policy().hermitian_tol)) {
    throw ValidationError(fmt::format("{}: matrix is not Hermitian (max |A - A^dagger| = {:.3e})",
                                      what, defect));
  }
}

}  // namespace

const NumericPolicy& numeric_policy() { return mutable_policy(); }

void set_numeric_policy(const NumericPolicy& policy) { mutable_policy() = policy; }

double hermitian_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tol) { return hermitian_defect(a) <= tol; }

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError(fmt::format("{}: expected a non-empty square matrix, got {}x{}", what,
                                      a.rows(), a.cols()));
  }
  if (a.rows() > numeric_policy().max_dim) {
    throw ValidationError(fmt::format("{}: dimension {} exceeds the supported maximum {}", what,
                                      a.rows(), numeric_policy().max_dim));
  }
}

Spectrum::Spectrum(std::vector<double> eigenvalues) : values_(std::move(eigenvalues)) {
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

double Spectrum::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double Spectrum::max_deviation(const Spectrum& other) const {
  if (other.size() != size()) {
    throw ValidationError("Spectrum::max_deviation: size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    worst = std::max(worst, std::abs(values_[i] - other.values_[i]));
  }
  return worst;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  const auto& policy = numeric_policy();
  require_hermitian(m_, "DensityMatrix");
  const Complex tr = m_.trace();
  if (!(std::abs(tr - Complex(1.0, 0.0)) <= policy.trace_tol)) {
    throw ValidationError(fmt::format("DensityMatrix: trace is {}+{}i, expected 1", tr.real(),
                                      tr.imag()));
  }
  const Spectrum s = spectrum(m_);
  if (s.values().back() < -policy.positivity_tol) {
    throw ValidationError(
        fmt::format("DensityMatrix: negative eigenvalue {:.3e}", s.values().back()));
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ValidationError("DensityMatrix::pure: zero state vector");
  const ComplexVector v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(int dim, int level) {
  if (level < 0 || level >= dim) {
    throw ValidationError(fmt::format("basis_state: level {} outside 0..{}", level, dim - 1));
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(level, level) = 1.0;
  return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

DensityMatrix propagate_unchecked(const ComplexMatrix& u, const DensityMatrix& rho) {
  ComplexMatrix next = u * rho.m_ * u.adjoint();
  // Remove the anti-Hermitian rounding residue so it cannot accumulate.
  ComplexMatrix sym = 0.5 * (next + next.adjoint());
  return DensityMatrix(std::move(sym), DensityMatrix::Unchecked{});
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(fmt::format("commutator: dimension mismatch {}x{} vs {}x{}", a.rows(),
                                      a.cols(), b.rows(), b.cols()));
  }
  return a * b - b * a;
}

HermitianPropagator::HermitianPropagator(const ComplexMatrix& h) {
  require_hermitian(h, "HermitianPropagator");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("HermitianPropagator: eigensolver did not converge");
  }
  energies_ = solver.eigenvalues();
  basis_ = solver.eigenvectors();
}

ComplexMatrix HermitianPropagator::at(double t) const {
  const Eigen::Index n = energies_.size();
  ComplexVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phases(i) = std::polar(1.0, -energies_(i) * t);
  }
  return basis_ * phases.asDiagonal() * basis_.adjoint();
}

ComplexMatrix matrix_exp_skewh(const ComplexMatrix& h, double t) {
  ComplexMatrix u = HermitianPropagator(h).at(t);
  const double defect =
      (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (!(defect <= numeric_policy().unitarity_tol)) {
    throw NumericalError(fmt::format("matrix_exp_skewh: result not unitary (defect {:.3e})", defect));
  }
  return u;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& target) {
  if (rho.dim() != target.dim()) throw ValidationError("fidelity: dimension mismatch");
  return (rho.matrix() * target.matrix()).trace().real();
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

Spectrum spectrum(const ComplexMatrix& a) {
  require_hermitian(a, "spectrum");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("spectrum: eigensolver failed");
  const RealVector& ev = solver.eigenvalues();
  return Spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace qlyap
