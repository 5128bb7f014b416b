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

#include "entlab/finite_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "entlab/parallel.hpp"
#include "entlab/sampling.hpp"

namespace entlab {

CMatrix kron(const CMatrix& a, const CMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

BipartiteHamiltonian BipartiteHamiltonian::from_matrix(CMatrix matrix, int d_A, int d_B) {
  if (d_A < 1 || d_B < 1 || matrix.rows() != static_cast<Eigen::Index>(d_A) * d_B || matrix.cols() != matrix.rows()) {
    throw DimensionMismatch("Hamiltonian shape " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                            " does not match d_A*d_B = " + std::to_string(d_A * d_B));
  }
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw InvalidArgument("Hamiltonian is not Hermitian (deviation " + std::to_string(herm) + ")");
  return BipartiteHamiltonian(std::move(matrix), d_A, d_B);
}

BipartiteHamiltonian BipartiteHamiltonian::factorized(const CMatrix& h_A, const CMatrix& h_B) {
  const auto d_A = static_cast<int>(h_A.rows());
  const auto d_B = static_cast<int>(h_B.rows());
  CMatrix h = kron(h_A, CMatrix::Identity(d_B, d_B)) + kron(CMatrix::Identity(d_A, d_A), h_B);
  return from_matrix(std::move(h), d_A, d_B);
}

BipartiteHamiltonian BipartiteHamiltonian::pauli_sum(const std::vector<std::tuple<double, char, char>>& terms) {
  CMatrix h = CMatrix::Zero(4, 4);
  for (const auto& [coeff, a, b] : terms) h += coeff * kron(pauli::by_name(a), pauli::by_name(b));
  return from_matrix(std::move(h), 2, 2);
}

FinitePropagator::FinitePropagator(const BipartiteHamiltonian& h) : h_(h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (h.matrix() + h.matrix().adjoint()));
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

PureState FinitePropagator::evolve(const PureState& psi0, double t) const {
  if (psi0.d_A() != h_.d_A() || psi0.d_B() != h_.d_B()) {
    throw DimensionMismatch("evolve: state is " + std::to_string(psi0.d_A()) + "x" + std::to_string(psi0.d_B()) +
                            " but the Hamiltonian acts on " + std::to_string(h_.d_A()) + "x" +
                            std::to_string(h_.d_B()));
  }
  CVector c = eigenvectors_.adjoint() * psi0.to_vector();
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -energies_(k) * t);
  return PureState::from_vector(eigenvectors_ * c, h_.d_A(), h_.d_B(), 1e-10);
}

FiniteTrajectory evolve_finite(const BipartiteHamiltonian& h, const PureState& psi0, double t_final, int n_samples) {
  if (n_samples < 2) throw InvalidArgument("evolve_finite: n_samples must be at least 2");
  if (!(t_final > 0.0)) throw InvalidArgument("evolve_finite: t_final must be positive");
  if (psi0.d_A() != h.d_A() || psi0.d_B() != h.d_B()) throw DimensionMismatch("evolve_finite: dimension mismatch");
  const FinitePropagator prop(h);
  FiniteTrajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    const double t = t_final * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    PureState s = prop.evolve(psi0, t);
    traj.times.push_back(t);
    traj.norms.push_back(s.amplitudes().norm());
    traj.entropies.push_back(entanglement(s));
    traj.states.push_back(std::move(s));
  }
  return traj;
}

HamiltonianSplit split_hamiltonian(const BipartiteHamiltonian& h, double tol) {
  const int d_A = h.d_A();
  const int d_B = h.d_B();
  const CMatrix& m = h.matrix();
  CMatrix tr_B = CMatrix::Zero(d_A, d_A);
  CMatrix tr_A = CMatrix::Zero(d_B, d_B);
  for (int i = 0; i < d_A; ++i)
    for (int ip = 0; ip < d_A; ++ip)
      for (int j = 0; j < d_B; ++j) tr_B(i, ip) += m(i * d_B + j, ip * d_B + j);
  for (int j = 0; j < d_B; ++j)
    for (int jp = 0; jp < d_B; ++jp)
      for (int i = 0; i < d_A; ++i) tr_A(j, jp) += m(i * d_B + j, i * d_B + jp);

  const cd half_mean = m.trace() / (2.0 * d_A * d_B);
  HamiltonianSplit out;
  out.h_A = tr_B / static_cast<double>(d_B) - half_mean * CMatrix::Identity(d_A, d_A);
  out.h_B = tr_A / static_cast<double>(d_A) - half_mean * CMatrix::Identity(d_B, d_B);
  const CMatrix residual =
      m - kron(out.h_A, CMatrix::Identity(d_B, d_B)) - kron(CMatrix::Identity(d_A, d_A), out.h_B);
  out.residual_norm = residual.norm();
  out.factorized = out.residual_norm < tol;
  return out;
}

PureState witness_product_state(int d_A, int d_B, std::uint64_t seed, int k) {
  SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(k));
  const Ket a = random_ket(d_A, rng);
  const Ket b = random_ket(d_B, rng);
  return tensor_product(a, b);
}

WitnessReport theorem_witness(const BipartiteHamiltonian& h, int n_product_samples, double t_final,
                              std::uint64_t seed, const WitnessOptions& options) {
  if (n_product_samples < 1) throw InvalidArgument("theorem_witness: need at least one product sample");
  if (options.n_time_samples < 2) throw InvalidArgument("theorem_witness: need at least two time samples");
  if (!(t_final > 0.0)) throw InvalidArgument("theorem_witness: t_final must be positive");

  const HamiltonianSplit split = split_hamiltonian(h, options.split_tol);
  const FinitePropagator prop(h);
  std::vector<double> peak(static_cast<std::size_t>(n_product_samples), 0.0);

  parallel_for(n_product_samples, options.threads, [&](int k) {
    const PureState psi0 = witness_product_state(h.d_A(), h.d_B(), seed, k);
    double best = 0.0;
    for (int s = 0; s < options.n_time_samples; ++s) {
      const double t = t_final * static_cast<double>(s) / static_cast<double>(options.n_time_samples - 1);
      best = std::max(best, entanglement(prop.evolve(psi0, t)));
    }
    peak[static_cast<std::size_t>(k)] = best;
  });

  WitnessReport r;
  r.factorized = split.factorized;
  r.residual_norm = split.residual_norm;
  r.n_product_samples = n_product_samples;
  const auto it = std::max_element(peak.begin(), peak.end());
  r.max_entanglement = *it;
  r.worst_sample = static_cast<int>(it - peak.begin());
  return r;
}

}  // namespace entlab
