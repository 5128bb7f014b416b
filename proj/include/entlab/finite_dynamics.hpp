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

// Schrodinger evolution of a finite bipartite system (hbar = 1) and a
// numerical check of the interaction/entanglement equivalence: every product
// state stays a product state iff H = H_A (x) I_B + I_A (x) H_B.

#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "entlab/entanglement.hpp"
#include "entlab/qubit.hpp"

namespace entlab {

/// Kronecker product, A index major.
CMatrix kron(const CMatrix& a, const CMatrix& b);

class BipartiteHamiltonian {
 public:
  /// Throws DimensionMismatch for a wrong shape, InvalidArgument if not Hermitian within 1e-10.
  static BipartiteHamiltonian from_matrix(CMatrix matrix, int d_A, int d_B);
  /// H_A (x) I + I (x) H_B.
  static BipartiteHamiltonian factorized(const CMatrix& h_A, const CMatrix& h_B);
  /// sum_k coeff_k sigma_a (x) sigma_b for two qubits.
  static BipartiteHamiltonian pauli_sum(const std::vector<std::tuple<double, char, char>>& terms);

  int d_A() const { return d_A_; }
  int d_B() const { return d_B_; }
  int dim() const { return d_A_ * d_B_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  BipartiteHamiltonian(CMatrix matrix, int d_A, int d_B) : matrix_(std::move(matrix)), d_A_(d_A), d_B_(d_B) {}
  CMatrix matrix_;
  int d_A_;
  int d_B_;
};

/// exp(-i H t) from one eigendecomposition of H; immutable and shareable.
class FinitePropagator {
 public:
  explicit FinitePropagator(const BipartiteHamiltonian& h);

  PureState evolve(const PureState& psi0, double t) const;
  const BipartiteHamiltonian& hamiltonian() const { return h_; }

 private:
  BipartiteHamiltonian h_;
  RVector energies_;
  CMatrix eigenvectors_;
};

struct FiniteTrajectory {
  std::vector<double> times;
  std::vector<PureState> states;
  std::vector<double> entropies;
  std::vector<double> norms;
};

/// States at n_samples equally spaced times in [0, t_final] (both ends included).
/// Requires n_samples >= 2, t_final > 0 and matching dimensions.
FiniteTrajectory evolve_finite(const BipartiteHamiltonian& h, const PureState& psi0, double t_final, int n_samples);

struct HamiltonianSplit {
  bool factorized = false;
  CMatrix h_A;
  CMatrix h_B;
  double residual_norm = 0.0;
};

/// Orthogonal (Hilbert-Schmidt) projection onto {X (x) I + I (x) Y}:
///   H_A = Tr_B(H)/d_B - Tr(H)/(2 d_A d_B) I,  H_B = Tr_A(H)/d_A - Tr(H)/(2 d_A d_B) I.
/// residual_norm = ||H - H_A (x) I - I (x) H_B||_F; factorized = residual_norm < tol.
HamiltonianSplit split_hamiltonian(const BipartiteHamiltonian& h, double tol = 1e-9);

struct WitnessReport {
  bool factorized = false;
  double residual_norm = 0.0;
  /// Largest entanglement over all sampled product states and times.
  double max_entanglement = 0.0;
  /// Sample index attaining max_entanglement.
  int worst_sample = 0;
  int n_product_samples = 0;
};

struct WitnessOptions {
  int n_time_samples = 101;
  double split_tol = 1e-9;
  int threads = 1;
};

/// Product state used by theorem_witness for sample k: independent Haar kets drawn
/// from SplitMix64::stream(seed, k).
PureState witness_product_state(int d_A, int d_B, std::uint64_t seed, int k);

/// Evolves n_product_samples random product states over [0, t_final] and records the
/// largest entanglement reached.
WitnessReport theorem_witness(const BipartiteHamiltonian& h, int n_product_samples, double t_final,
                              std::uint64_t seed, const WitnessOptions& options = {});

}  // namespace entlab
