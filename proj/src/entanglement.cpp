// Copyright 2026 The entlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entlab/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace entlab {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPositivityTol = 1e-10;
constexpr double kNegativeEigenvalueFailure = -1e-8;

}  // namespace

DensityMatrix DensityMatrix::from_matrix(CMatrix matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) throw NotAState("density matrix must be square and non-empty");
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) throw NotAState("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  const cd tr = matrix.trace();
  if (std::abs(tr - 1.0) > kTraceTol) throw NotAState("density matrix trace is " + std::to_string(tr.real()));
  DensityMatrix rho(std::move(matrix));
  const double lowest = rho.eigenvalues()(0);
  if (lowest < -kPositivityTol) throw NotAState("density matrix has negative eigenvalue " + std::to_string(lowest));
  return rho;
}

RVector DensityMatrix::eigenvalues() const {
  // Symmetrize so round-off asymmetry cannot leak into the solver.
  const CMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

CMatrix SchmidtDecomposition::reconstruct() const {
  CMatrix m = CMatrix::Zero(basis_A.rows(), basis_B.rows());
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    const auto idx = static_cast<Eigen::Index>(k);
    m += coefficients[k] * basis_A.col(idx) * basis_B.col(idx).transpose();
  }
  return m;
}

DensityMatrix reduced_density_matrix(const PureState& state, Subsystem subsystem) {
  const CMatrix& m = state.amplitudes();
  if (subsystem == Subsystem::kA) return DensityMatrix::unchecked(m * m.adjoint());
  return DensityMatrix::unchecked(m.transpose() * m.conjugate());
}

SchmidtDecomposition schmidt_decompose(const PureState& state) {
  Eigen::JacobiSVD<CMatrix> svd(state.amplitudes(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  SchmidtDecomposition out;
  out.coefficients.assign(s.data(), s.data() + s.size());
  out.basis_A = svd.matrixU();
  // M = U S V^dagger, so psi = sum_k s_k u_k (x) conj(v_k).
  out.basis_B = svd.matrixV().conjugate();
  return out;
}

int schmidt_number(const SchmidtDecomposition& d, double cutoff) {
  if (!(cutoff > 0.0)) throw InvalidArgument("schmidt_number: cutoff must be positive");
  return static_cast<int>(std::count_if(d.coefficients.begin(), d.coefficients.end(),
                                        [cutoff](double c) { return c > cutoff; }));
}

double shannon_entropy(const std::vector<double>& probabilities, double base) {
  if (!(base > 1.0)) return 0.0;
  const double log_base = std::log(base);
  double s = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s / log_base;
}

double von_neumann_entropy(const DensityMatrix& rho, int base) {
  const int b = base > 0 ? base : rho.dim();
  const RVector ev = rho.eigenvalues();
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double l = ev(i);
    if (l < kNegativeEigenvalueFailure) {
      throw NotAState("von_neumann_entropy: eigenvalue " + std::to_string(l) + " is negative");
    }
    p.push_back(std::max(l, 0.0));
  }
  return shannon_entropy(p, static_cast<double>(b));
}

double coherence(const DensityMatrix& rho, int base) { return 1.0 - von_neumann_entropy(rho, base); }

double entanglement(const PureState& state) {
  const int base = std::min(state.d_A(), state.d_B());
  return von_neumann_entropy(reduced_density_matrix(state, Subsystem::kA), base);
}

FactorizationResult is_factorizable(const PureState& state, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("is_factorizable: tol must be positive");
  const SchmidtDecomposition d = schmidt_decompose(state);
  const double second = d.coefficients.size() > 1 ? d.coefficients[1] : 0.0;
  CMatrix top = d.basis_A.col(0) * d.basis_B.col(0).transpose();
  return FactorizationResult{second < tol, PureState::normalized(std::move(top)), second};
}

}  // namespace entlab
