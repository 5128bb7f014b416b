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

// Regimes in which two interacting particles stay (nearly) unentangled.
//
// Three comparators run side by side on the same fixture:
//   * the full two-particle split-step solution Psi(x_A, x_B, t);
//   * the Hartree (mean-field) product psi_A(t) psi_B(t), where each particle
//     moves in V convolved with the other's density;
//   * the classical two-body trajectory (fixed-step RK4).
// A scan varies one regime parameter and records, per point, the largest
// entanglement entropy of Psi, the Hartree fidelity |<Psi|psi_A psi_B>|^2 and
// the distance between the Ehrenfest means and the classical trajectory.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entlab/fft.hpp"
#include "entlab/grid.hpp"

namespace entlab {

class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct HartreePair {
  CVector psi_A;
  CVector psi_B;
  GridSpec spec;

  static HartreePair from_packets(const GaussianPacket& packet_A, const GaussianPacket& packet_B,
                                  const GridSpec& spec);
  double norm_A() const;
  double norm_B() const;
  /// Throws InvalidArgument if a factor has the wrong length or |norm - 1| > tol.
  void validate(double tol = 1e-8) const;
};

struct EffectivePotentials {
  RVector on_A;
  RVector on_B;
};

/// Mean-field split-step propagator. Both grids must coincide (n_A = n_B,
/// length_A = length_B) so the interaction is a circulant kernel and the
/// convolutions run through FFTs.
class HartreePropagator {
 public:
  HartreePropagator(const GridSpec& spec, const PotentialSpec& potential, double dt);
  HartreePropagator(const HartreePropagator&) = delete;
  HartreePropagator& operator=(const HartreePropagator&) = delete;

  /// V_eff,A(x_i) = sum_j |psi_B(y_j)|^2 V(x_i - y_j) dx and symmetrically for B.
  EffectivePotentials effective_potentials(const HartreePair& pair);
  void advance(HartreePair& pair, int n);

 private:
  RVector convolve(const RVector& density, const CVector& kernel_hat);
  void kinetic(CVector& psi, const CVector& phase);

  GridSpec spec_;
  double dt_;
  bool interacting_;
  CVector kernel_A_hat_;
  CVector kernel_B_hat_;
  CVector kinetic_A_;
  CVector kinetic_B_;
  CVector buffer_;
  FftPlan plan_;
};

struct HartreeTrajectory {
  std::vector<double> times;
  std::vector<HartreePair> states;
};

/// Samples at step 0, every sample_every steps and at the last step.
/// Throws NumericalFailure if either factor becomes non-finite or loses its norm.
HartreeTrajectory hartree_evolve(const HartreePair& pair, const PotentialSpec& potential, double dt, int n_steps,
                                 int sample_every);

/// |<Psi | psi_A (x) psi_B>|^2 by quadrature. Throws GridMismatch for different grids.
double hartree_fidelity(const Wavefunction2P& full, const HartreePair& pair);

struct ClassicalState {
  double x_A = 0.0;
  double x_B = 0.0;
  double p_A = 0.0;
  double p_B = 0.0;
};

double classical_energy(const ClassicalState& s, const PotentialSpec& potential, double m_A, double m_B);

/// Fixed-step RK4 for m_A x_A'' = -V'(x_A - x_B), m_B x_B'' = +V'(x_A - x_B).
/// Returns n_steps + 1 states including the initial one. Infinite masses do not move.
std::vector<ClassicalState> rk4_two_body(const ClassicalState& initial, const PotentialSpec& potential, double m_A,
                                         double m_B, double dt, int n_steps);

struct IslandFixture {
  GridSpec grid;
  GaussianPacket packet_A;
  GaussianPacket packet_B;
  PotentialSpec potential;
  double dt = 0.005;
  int n_steps = 1000;
  int sample_every = 50;
  int rank_bound = kDefaultRankBound;
  /// RK4 steps per quantum step.
  int rk4_substeps = 4;

  /// Relabels A <-> B (grid, masses, packets); the interaction is even in r.
  IslandFixture swapped() const;
};

struct IslandSample {
  double time = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  double entropy_bits = 0.0;
  double fidelity = 0.0;
  double mean_x_A = 0.0;
  double mean_x_B = 0.0;
  double classical_x_A = 0.0;
  double classical_x_B = 0.0;
};

struct ScanPoint {
  double parameter = 0.0;
  double max_entropy_bits = 0.0;
  double final_fidelity = 0.0;
  double min_fidelity = 0.0;
  /// max over samples of max(|<x_A> - x_A^cl|, |<x_B> - x_B^cl|).
  double trajectory_deviation = 0.0;
  double norm_drift = 0.0;
  double energy_drift = 0.0;
  double classical_energy_drift = 0.0;
  std::vector<IslandSample> samples;
};

struct RegimeScanResult {
  std::string kind;
  std::uint64_t seed = 0;
  /// Sorted by ascending parameter.
  std::vector<ScanPoint> points;
};

/// Runs full, Hartree and classical evolution of one fixture.
ScanPoint run_island_point(const IslandFixture& fixture, double parameter = 0.0);

/// Test-particle regime: for each ratio m_A/m_B sets m_B = m_A / ratio and puts
/// B at rest with sigma = 4 grid cells. Ratios must be positive.
RegimeScanResult test_particle_scan(const std::vector<double>& mass_ratios, const IslandFixture& base,
                                    std::uint64_t seed, int threads = 1);

/// Material-point regime: for each ratio sets both packet widths to
/// ratio * potential.width. Ratios must lie in (0, 1).
RegimeScanResult material_point_scan(const std::vector<double>& width_ratios, const IslandFixture& base,
                                     std::uint64_t seed, int threads = 1);

}  // namespace entlab
