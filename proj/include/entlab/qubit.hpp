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

// Qubit and bipartite pure-state primitives.
//
// A bipartite pure state over C^{d_A} (x) C^{d_B} is stored as its d_A x d_B
// amplitude matrix M, with M(i, j) the amplitude of |i>^A (x) |j>^B. When a
// flat vector is needed the A index is major: flat[i * d_B + j] = M(i, j),
// which matches kron(H_A, I_B) acting on the flat vector.

#pragma once

#include <array>

#include "entlab/types.hpp"

namespace entlab {

/// Normalized single-system pure state, dim >= 2.
class Ket {
 public:
  /// Throws InvalidArgument if dim < 2 or | ||v|| - 1 | > tol.
  static Ket from_amplitudes(CVector amplitudes, double tol = 1e-12);
  /// Rescales to unit norm; throws on a zero vector.
  static Ket normalized(CVector amplitudes);
  static Ket basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  cd operator[](int i) const { return amplitudes_(i); }

 private:
  explicit Ket(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  CVector amplitudes_;
};

/// Normalized bipartite pure state.
class PureState {
 public:
  /// Throws InvalidArgument if the Frobenius norm differs from 1 by more than tol.
  static PureState from_amplitudes(CMatrix amplitudes, double tol = 1e-12);
  static PureState normalized(CMatrix amplitudes);
  /// Flat A-major vector of length d_A * d_B.
  static PureState from_vector(const CVector& flat, int d_A, int d_B, double tol = 1e-12);

  int d_A() const { return static_cast<int>(amplitudes_.rows()); }
  int d_B() const { return static_cast<int>(amplitudes_.cols()); }
  const CMatrix& amplitudes() const { return amplitudes_; }
  cd operator()(int i, int j) const { return amplitudes_(i, j); }
  CVector to_vector() const;

 private:
  explicit PureState(CMatrix amplitudes) : amplitudes_(std::move(amplitudes)) {}
  CMatrix amplitudes_;
};

/// Spin measurement axis given by polar angles, both reduced to [0, 2*pi).
class MeasurementDirection {
 public:
  MeasurementDirection(double theta, double phi = 0.0);

  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  double theta_;
  double phi_;
};

enum class SpinSign { kUp, kDown };

/// Joint outcome probabilities of two spin measurements (A outcome first).
struct JointProbabilities {
  double uu = 0.0;
  double ud = 0.0;
  double du = 0.0;
  double dd = 0.0;

  double sum() const { return uu + ud + du + dd; }
  double equal() const { return uu + dd; }
  std::array<double, 4> as_array() const { return {uu, ud, du, dd}; }
};

/// |<a|b>|, the phase-insensitive overlap.
double overlap(const Ket& a, const Ket& b);
double overlap(const PureState& a, const PureState& b);
/// True when the two states are the same ray: | |<a|b>| - 1 | <= tol.
bool same_ray(const PureState& a, const PureState& b, double tol = 1e-12);

/// The four Bell states, indexed as B^row_col:
///   (0,0): (|00> + |11>)/sqrt2     (0,1): (|10> + |01>)/sqrt2
///   (1,0): (|00> - |11>)/sqrt2     (1,1): (|01> - |10>)/sqrt2  (singlet)
PureState bell_state(int row_index, int col_index);

/// Amplitude matrix a_i * b_j.
PureState tensor_product(const Ket& a, const Ket& b);

/// Spinor eigenstate of n.sigma along dir. For kUp:
/// cos(theta/2) e^{-i phi/2} |+> + sin(theta/2) e^{i phi/2} |->; kDown is the
/// orthogonal companion -sin(theta/2) e^{-i phi/2} |+> + cos(theta/2) e^{i phi/2} |->.
Ket spin_eigenstate(const MeasurementDirection& dir, SpinSign sign);

/// Born-rule probabilities of (A along dir_A, B along dir_B) on a two-qubit state.
JointProbabilities joint_spin_probabilities(const PureState& state, const MeasurementDirection& dir_A,
                                            const MeasurementDirection& dir_B);

/// <psi| O_A (x) O_B |psi>.
cd joint_expectation(const PureState& state, const CMatrix& op_A, const CMatrix& op_B);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
/// Pauli matrix by letter: 'i', 'x', 'y' or 'z'.
CMatrix by_name(char name);
}  // namespace pauli

}  // namespace entlab
