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

#include "entlab/qubit.hpp"

#include <cmath>
#include <string>

namespace entlab {

namespace {

double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below 0 can round up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace

Ket Ket::from_amplitudes(CVector amplitudes, double tol) {
  if (amplitudes.size() < 2) {
    throw InvalidArgument("Ket: dimension must be at least 2, got " + std::to_string(amplitudes.size()));
  }
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > tol) {
    throw InvalidArgument("Ket: amplitudes not normalized (norm " + std::to_string(n) + ")");
  }
  return Ket(std::move(amplitudes));
}

Ket Ket::normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("Ket: cannot normalize a zero or non-finite vector");
  amplitudes /= n;
  return from_amplitudes(std::move(amplitudes));
}

Ket Ket::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw InvalidArgument("Ket::basis: index out of range");
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return from_amplitudes(std::move(v));
}

PureState PureState::from_amplitudes(CMatrix amplitudes, double tol) {
  if (amplitudes.rows() < 1 || amplitudes.cols() < 1) throw InvalidArgument("PureState: empty amplitude matrix");
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > tol) {
    throw InvalidArgument("PureState: amplitudes not normalized (norm " + std::to_string(n) + ")");
  }
  return PureState(std::move(amplitudes));
}

PureState PureState::normalized(CMatrix amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("PureState: cannot normalize a zero or non-finite matrix");
  amplitudes /= n;
  return from_amplitudes(std::move(amplitudes));
}

PureState PureState::from_vector(const CVector& flat, int d_A, int d_B, double tol) {
  if (d_A < 1 || d_B < 1 || flat.size() != static_cast<Eigen::Index>(d_A) * d_B) {
    throw DimensionMismatch("PureState::from_vector: length " + std::to_string(flat.size()) + " does not match " +
                            std::to_string(d_A) + "x" + std::to_string(d_B));
  }
  CMatrix m(d_A, d_B);
  for (int i = 0; i < d_A; ++i)
    for (int j = 0; j < d_B; ++j) m(i, j) = flat(static_cast<Eigen::Index>(i) * d_B + j);
  return from_amplitudes(std::move(m), tol);
}

CVector PureState::to_vector() const {
  CVector v(amplitudes_.size());
  for (int i = 0; i < d_A(); ++i)
    for (int j = 0; j < d_B(); ++j) v(static_cast<Eigen::Index>(i) * d_B() + j) = amplitudes_(i, j);
  return v;
}

MeasurementDirection::MeasurementDirection(double theta, double phi)
    : theta_(reduce_angle(theta)), phi_(reduce_angle(phi)) {}

double overlap(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("overlap: ket dimensions differ");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

double overlap(const PureState& a, const PureState& b) {
  if (a.d_A() != b.d_A() || a.d_B() != b.d_B()) throw DimensionMismatch("overlap: state dimensions differ");
  // Frobenius inner product sum conj(a_ij) b_ij.
  return std::abs((a.amplitudes().conjugate().cwiseProduct(b.amplitudes())).sum());
}

bool same_ray(const PureState& a, const PureState& b, double tol) { return std::abs(overlap(a, b) - 1.0) <= tol; }

PureState bell_state(int row_index, int col_index) {
  if (row_index < 0 || row_index > 1 || col_index < 0 || col_index > 1) {
    throw InvalidArgument("bell_state: indices must be 0 or 1");
  }
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix m = CMatrix::Zero(2, 2);
  const double sign = row_index == 0 ? 1.0 : -1.0;
  if (col_index == 0) {
    m(0, 0) = h;
    m(1, 1) = sign * h;
  } else {
    m(0, 1) = h;
    m(1, 0) = sign * h;
  }
  return PureState::from_amplitudes(std::move(m));
}

PureState tensor_product(const Ket& a, const Ket& b) {
  CMatrix m = a.amplitudes() * b.amplitudes().transpose();
  return PureState::from_amplitudes(std::move(m), 1e-10);
}

Ket spin_eigenstate(const MeasurementDirection& dir, SpinSign sign) {
  const double c = std::cos(dir.theta() / 2.0);
  const double s = std::sin(dir.theta() / 2.0);
  const cd minus_phase = std::polar(1.0, -dir.phi() / 2.0);
  const cd plus_phase = std::polar(1.0, dir.phi() / 2.0);
  CVector v(2);
  if (sign == SpinSign::kUp) {
    v(0) = c * minus_phase;
    v(1) = s * plus_phase;
  } else {
    v(0) = -s * minus_phase;
    v(1) = c * plus_phase;
  }
  return Ket::from_amplitudes(std::move(v));
}

JointProbabilities joint_spin_probabilities(const PureState& state, const MeasurementDirection& dir_A,
                                            const MeasurementDirection& dir_B) {
  if (state.d_A() != 2 || state.d_B() != 2) throw DimensionMismatch("joint_spin_probabilities: needs a two-qubit state");
  const Ket a_up = spin_eigenstate(dir_A, SpinSign::kUp);
  const Ket a_dn = spin_eigenstate(dir_A, SpinSign::kDown);
  const Ket b_up = spin_eigenstate(dir_B, SpinSign::kUp);
  const Ket b_dn = spin_eigenstate(dir_B, SpinSign::kDown);
  const CMatrix& m = state.amplitudes();
  // <a (x) b | psi> = a^dagger M conj(b).
  auto prob = [&](const Ket& a, const Ket& b) {
    const cd amp = a.amplitudes().adjoint() * m * b.amplitudes().conjugate();
    return std::norm(amp);
  };
  return {prob(a_up, b_up), prob(a_up, b_dn), prob(a_dn, b_up), prob(a_dn, b_dn)};
}

cd joint_expectation(const PureState& state, const CMatrix& op_A, const CMatrix& op_B) {
  if (op_A.rows() != state.d_A() || op_A.cols() != state.d_A() || op_B.rows() != state.d_B() ||
      op_B.cols() != state.d_B()) {
    throw DimensionMismatch("joint_expectation: operator dimensions do not match the state");
  }
  const CMatrix& m = state.amplitudes();
  // (O_A (x) O_B) acting on M is O_A M O_B^T.
  return (m.conjugate().cwiseProduct(op_A * m * op_B.transpose())).sum();
}

namespace pauli {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMatrix y() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = cd(0.0, -1.0);
  m(1, 0) = cd(0.0, 1.0);
  return m;
}

CMatrix z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

CMatrix by_name(char name) {
  switch (name) {
    case 'i':
    case 'I':
      return identity();
    case 'x':
    case 'X':
      return x();
    case 'y':
    case 'Y':
      return y();
    case 'z':
    case 'Z':
      return z();
    default:
      throw InvalidArgument(std::string("unknown Pauli operator '") + name + "'");
  }
}

}  // namespace pauli

}  // namespace entlab
