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

// Two distinguishable particles on a 1D periodic lattice (hbar = 1):
//
//   i d/dt Psi(x_A, x_B) = -(1/2m_A d^2/dx_A^2 + 1/2m_B d^2/dx_B^2) Psi + V(x_A - x_B) Psi
//
// Particle A lives on n_A points of [-L_A/2, L_A/2), particle B on n_B points of
// [-L_B/2, L_B/2). Wavefunctions are normalized so that sum |Psi|^2 dx_A dx_B = 1.
// The kinetic term is applied exactly in momentum space; the interaction
// depends only on the minimal-image relative coordinate.

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "entlab/fft.hpp"
#include "entlab/types.hpp"

namespace entlab {

struct GridSpec {
  int n_A = 256;
  int n_B = 256;
  double length_A = 40.0;
  double length_B = 40.0;
  /// Masses may be +infinity, which freezes that particle's kinetic term.
  double m_A = 1.0;
  double m_B = 1.0;

  /// Throws InvalidArgument unless n >= 16 are powers of two and lengths, masses > 0.
  void validate() const;
  double dx_A() const { return length_A / n_A; }
  double dx_B() const { return length_B / n_B; }
  double x_A(int i) const { return -0.5 * length_A + i * dx_A(); }
  double x_B(int j) const { return -0.5 * length_B + j * dx_B(); }
  bool operator==(const GridSpec&) const = default;
};

/// r reduced into [-length/2, length/2).
double minimal_image(double r, double length);

enum class PotentialKind { kGaussianWell, kGaussianBarrier, kSoftCoulomb };

const char* potential_kind_name(PotentialKind kind);
PotentialKind potential_kind_from_name(const std::string& name);

/// Interaction as a function of the relative coordinate r = x_A - x_B:
///   gaussian_well     -s exp(-r^2 / (2 w^2))
///   gaussian_barrier  +s exp(-r^2 / (2 w^2))
///   soft_coulomb       s / sqrt(r^2 + w^2)
/// with s = strength and w = width (the softening length for soft_coulomb).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::kGaussianWell;
  double strength = 0.0;
  double width = 1.0;

  double operator()(double r) const;
  double derivative(double r) const;
  double max_abs() const;
  bool is_zero() const { return strength == 0.0; }
};

struct GaussianPacket {
  double center = 0.0;
  /// Position standard deviation of |psi|^2.
  double sigma = 1.0;
  double momentum = 0.0;
};

class PacketTooWide : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// psi(x) ~ exp(-(x - c)^2 / (4 sigma^2) + i k (x - c)), with x - c taken as a
/// minimal image, normalized so that sum |psi|^2 dx = 1. Throws PacketTooWide
/// unless 0 < sigma < length / 8.
CVector packet_on_grid(const GaussianPacket& packet, int n, double length);

class Wavefunction2P {
 public:
  /// Throws DimensionMismatch if the grid is not n_A x n_B, InvalidArgument if the
  /// norm differs from 1 by more than tol.
  Wavefunction2P(ComplexGrid grid, GridSpec spec, double tol = 1e-8);

  const ComplexGrid& grid() const { return grid_; }
  const GridSpec& spec() const { return spec_; }
  /// sum |Psi|^2 dx_A dx_B.
  double norm() const;
  /// Amplitude matrix scaled by sqrt(dx_A dx_B): the discrete state vector.
  CMatrix discrete_amplitudes() const;

 private:
  ComplexGrid grid_;
  GridSpec spec_;
};

/// Psi(x_i, y_j) = psi_A(x_i) psi_B(y_j).
Wavefunction2P init_product(const GaussianPacket& packet_A, const GaussianPacket& packet_B, const GridSpec& spec);

struct GridEntropy {
  double bits = 0.0;
  /// bits / log2(rank_bound).
  double normalized = 0.0;
  /// Number of squared singular values kept (above 1e-14).
  int rank = 0;
};

inline constexpr int kDefaultRankBound = 64;
inline constexpr double kSchmidtProbabilityFloor = 1e-14;

/// Base-2 entropy of the squared singular values of the discrete amplitudes,
/// with values below 1e-14 dropped.
GridEntropy entanglement_entropy_grid(const Wavefunction2P& psi, int rank_bound = kDefaultRankBound);

/// Discretized reduced density matrix (unit trace) of one particle.
CMatrix reduced_density_grid(const Wavefunction2P& psi, bool subsystem_A);

/// Base-2 entropy of a reduced density matrix spectrum with the same 1e-14 floor.
double entropy_bits_of_reduced(const CMatrix& rho);

struct Observables {
  double mean_x_A = 0.0;
  double mean_x_B = 0.0;
  double mean_p_A = 0.0;
  double mean_p_B = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double energy = 0.0;
  double norm = 0.0;
};

/// Position means by quadrature, momentum means and kinetic energy in momentum
/// space, potential energy by quadrature. Expectations are divided by the norm.
Observables ehrenfest_observables(const Wavefunction2P& psi, const PotentialSpec& potential);

struct GridSample {
  double time = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  double entropy_bits = 0.0;
  double entropy_normalized = 0.0;
  double mean_x_A = 0.0;
  double mean_x_B = 0.0;
  double mean_p_A = 0.0;
  double mean_p_B = 0.0;
};

struct GridTrajectory {
  std::vector<GridSample> samples;
  Wavefunction2P final_state;

  double max_entropy_bits() const;
  /// max |norm(t) - norm(0)|.
  double norm_drift() const;
  /// max |E(t) - E(0)| / |E(0)|.
  double relative_energy_drift() const;
};

struct SplitStepOptions {
  int rank_bound = kDefaultRankBound;
  /// Skip the SVD at sample points (entropy columns are then zero).
  bool track_entropy = true;
  /// Optional per-sample callback receiving (step index, current state).
  std::function<void(int, const Wavefunction2P&)> on_sample;
};

/// Largest allowed potential phase per step, dt * max|V|.
inline constexpr double kMaxPotentialPhase = 0.1;

/// Precomputed second-order Strang propagator:
///   Psi <- e^{-i V dt/2} F^-1 e^{-i T dt} F e^{-i V dt/2} Psi.
class SplitStepPropagator {
 public:
  /// Throws InvalidArgument if dt <= 0, dt * max|V| > kMaxPotentialPhase, or the
  /// two box lengths differ while the potential is nonzero.
  SplitStepPropagator(const GridSpec& spec, const PotentialSpec& potential, double dt);
  SplitStepPropagator(const SplitStepPropagator&) = delete;
  SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

  /// Advances grid (n_A x n_B, row-major) by n steps in place.
  void advance(ComplexGrid& grid, int n);
  double dt() const { return dt_; }

 private:
  GridSpec spec_;
  double dt_;
  ComplexGrid kinetic_phase_;
  ComplexGrid half_potential_phase_;
  ComplexGrid work_;
  FftPlan plan_;
};

/// Evolves psi for n_steps, sampling observables at step 0, every sample_every
/// steps and at the last step. Throws NumericalFailure on NaN/Inf or a norm
/// departing from 1 by more than 1e-6.
GridTrajectory evolve_split_step(const Wavefunction2P& psi, const PotentialSpec& potential, double dt, int n_steps,
                                 int sample_every, const SplitStepOptions& options = {});

}  // namespace entlab
