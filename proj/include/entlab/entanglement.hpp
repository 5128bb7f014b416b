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

// Entanglement metrology for bipartite pure states: partial traces, the
// Schmidt (bi-orthogonal) decomposition, base-d von Neumann entropy and the
// coherence C = 1 - S. For a pure state E(A-B) = 1 - C(A) = 1 - C(B).

#pragma once

#include <vector>

#include "entlab/qubit.hpp"

namespace entlab {

enum class Subsystem { kA, kB };

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates: Hermitian within 1e-10, trace 1 +- 1e-10, smallest eigenvalue >= -1e-10.
  /// Throws NotAState otherwise.
  static DensityMatrix from_matrix(CMatrix matrix);
  /// Skips validation. For matrices that are density matrices by construction.
  static DensityMatrix unchecked(CMatrix matrix) { return DensityMatrix(std::move(matrix)); }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  /// Ascending eigenvalues.
  RVector eigenvalues() const;
  double purity() const;

 private:
  explicit DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {}
  CMatrix matrix_;
};

struct SchmidtDecomposition {
  /// Nonincreasing, nonnegative; min(d_A, d_B) entries.
  std::vector<double> coefficients;
  /// Column k is the A-side Schmidt vector paired with coefficients[k].
  CMatrix basis_A;
  /// Column k is the B-side Schmidt vector; relative phases live here.
  CMatrix basis_B;

  /// sum_k alpha_k |k>^A (x) |k>^B as an amplitude matrix.
  CMatrix reconstruct() const;
};

struct FactorizationResult {
  bool factorizable = false;
  /// Normalized top Schmidt pair psi_A (x) psi_B.
  PureState nearest_product;
  double second_coefficient = 0.0;
};

/// rho^A = M M^dagger, rho^B = M^T conj(M).
DensityMatrix reduced_density_matrix(const PureState& state, Subsystem subsystem);

/// Singular value decomposition of the amplitude matrix.
SchmidtDecomposition schmidt_decompose(const PureState& state);

/// Number of coefficients strictly above cutoff. Throws if cutoff <= 0.
int schmidt_number(const SchmidtDecomposition& d, double cutoff = 1e-8);

/// -sum lambda log_base lambda over the spectrum, 0 log 0 = 0. base defaults to rho.dim().
/// Eigenvalues in [-1e-8, 0) are treated as zero; anything more negative throws NotAState.
double von_neumann_entropy(const DensityMatrix& rho, int base = 0);

/// 1 - von_neumann_entropy(rho, base).
double coherence(const DensityMatrix& rho, int base = 0);

/// Entropy of rho^A in base min(d_A, d_B).
double entanglement(const PureState& state);

/// Factorizable iff the second Schmidt coefficient is below tol.
FactorizationResult is_factorizable(const PureState& state, double tol);

/// Shannon entropy of a probability vector in the given base, 0 log 0 = 0.
double shannon_entropy(const std::vector<double>& probabilities, double base);

}  // namespace entlab
