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

#include "entlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "grid_internal.hpp"

namespace entlab {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double entropy_bits_of_probabilities(std::vector<double> p, int* kept) {
  double total = 0.0;
  for (double v : p) total += std::max(v, 0.0);
  double s = 0.0;
  int count = 0;
  for (double v : p) {
    const double q = v / total;
    if (q < kSchmidtProbabilityFloor) continue;
    s -= q * std::log2(q);
    ++count;
  }
  if (kept != nullptr) *kept = count;
  // -q log q summed over a single q = 1 can come out as -0.0.
  return std::max(s, 0.0);
}

}  // namespace

void GridSpec::validate() const {
  if (n_A < 16 || n_B < 16 || !is_power_of_two(n_A) || !is_power_of_two(n_B)) {
    throw InvalidArgument("grid point counts must be powers of two >= 16 (got " + std::to_string(n_A) + ", " +
                          std::to_string(n_B) + ")");
  }
  if (!(length_A > 0.0) || !(length_B > 0.0) || !std::isfinite(length_A) || !std::isfinite(length_B)) {
    throw InvalidArgument("box lengths must be positive and finite");
  }
  if (!(m_A > 0.0) || !(m_B > 0.0)) throw InvalidArgument("masses must be positive");
}

double minimal_image(double r, double length) {
  double d = std::fmod(r + 0.5 * length, length);
  if (d < 0.0) d += length;
  return d - 0.5 * length;
}

const char* potential_kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::kGaussianWell:
      return "gaussian_well";
    case PotentialKind::kGaussianBarrier:
      return "gaussian_barrier";
    case PotentialKind::kSoftCoulomb:
      return "soft_coulomb";
  }
  return "?";
}

PotentialKind potential_kind_from_name(const std::string& name) {
  if (name == "gaussian_well") return PotentialKind::kGaussianWell;
  if (name == "gaussian_barrier") return PotentialKind::kGaussianBarrier;
  if (name == "soft_coulomb") return PotentialKind::kSoftCoulomb;
  throw InvalidArgument("unknown potential kind '" + name + "'");
}

double PotentialSpec::operator()(double r) const {
  switch (kind) {
    case PotentialKind::kGaussianWell:
      return -strength * std::exp(-r * r / (2.0 * width * width));
    case PotentialKind::kGaussianBarrier:
      return strength * std::exp(-r * r / (2.0 * width * width));
    case PotentialKind::kSoftCoulomb:
      return strength / std::sqrt(r * r + width * width);
  }
  return 0.0;
}

double PotentialSpec::derivative(double r) const {
  switch (kind) {
    case PotentialKind::kGaussianWell:
    case PotentialKind::kGaussianBarrier:
      return (*this)(r) * (-r / (width * width));
    case PotentialKind::kSoftCoulomb: {
      const double q = r * r + width * width;
      return -strength * r / (q * std::sqrt(q));
    }
  }
  return 0.0;
}

double PotentialSpec::max_abs() const {
  if (kind == PotentialKind::kSoftCoulomb) return std::abs(strength) / width;
  return std::abs(strength);
}

CVector packet_on_grid(const GaussianPacket& packet, int n, double length) {
  if (!(packet.sigma > 0.0) || !(packet.sigma < length / 8.0)) {
    throw PacketTooWide("packet sigma " + std::to_string(packet.sigma) + " must lie in (0, length/8 = " +
                        std::to_string(length / 8.0) + ")");
  }
  const double dx = length / n;
  CVector psi(n);
  for (int i = 0; i < n; ++i) {
    const double d = minimal_image(-0.5 * length + i * dx - packet.center, length);
    psi(i) = std::polar(std::exp(-d * d / (4.0 * packet.sigma * packet.sigma)), packet.momentum * d);
  }
  psi /= std::sqrt(psi.squaredNorm() * dx);
  return psi;
}

Wavefunction2P::Wavefunction2P(ComplexGrid grid, GridSpec spec, double tol) : grid_(std::move(grid)), spec_(spec) {
  spec_.validate();
  if (grid_.rows() != spec_.n_A || grid_.cols() != spec_.n_B) {
    throw DimensionMismatch("wavefunction grid is " + std::to_string(grid_.rows()) + "x" +
                            std::to_string(grid_.cols()) + ", spec expects " + std::to_string(spec_.n_A) + "x" +
                            std::to_string(spec_.n_B));
  }
  const double n = norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    throw InvalidArgument("wavefunction norm " + std::to_string(n) + " is not 1");
  }
}

double Wavefunction2P::norm() const { return grid_.squaredNorm() * spec_.dx_A() * spec_.dx_B(); }

CMatrix Wavefunction2P::discrete_amplitudes() const {
  return CMatrix(grid_) * std::sqrt(spec_.dx_A() * spec_.dx_B());
}

Wavefunction2P init_product(const GaussianPacket& packet_A, const GaussianPacket& packet_B, const GridSpec& spec) {
  spec.validate();
  const CVector a = packet_on_grid(packet_A, spec.n_A, spec.length_A);
  const CVector b = packet_on_grid(packet_B, spec.n_B, spec.length_B);
  ComplexGrid g = a * b.transpose();
  return Wavefunction2P(std::move(g), spec, 1e-10);
}

GridEntropy entanglement_entropy_grid(const Wavefunction2P& psi, int rank_bound) {
  if (rank_bound < 2) throw InvalidArgument("rank_bound must be at least 2");
  Eigen::BDCSVD<CMatrix> svd(psi.discrete_amplitudes());
  const RVector& s = svd.singularValues();
  std::vector<double> p(static_cast<std::size_t>(s.size()));
  for (Eigen::Index k = 0; k < s.size(); ++k) p[static_cast<std::size_t>(k)] = s(k) * s(k);
  GridEntropy e;
  e.bits = entropy_bits_of_probabilities(std::move(p), &e.rank);
  e.normalized = e.bits / std::log2(static_cast<double>(rank_bound));
  return e;
}

CMatrix reduced_density_grid(const Wavefunction2P& psi, bool subsystem_A) {
  const CMatrix m = psi.discrete_amplitudes();
  CMatrix rho = subsystem_A ? CMatrix(m * m.adjoint()) : CMatrix(m.transpose() * m.conjugate());
  return rho / rho.trace().real();
}

double entropy_bits_of_reduced(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  const RVector& ev = solver.eigenvalues();
  return entropy_bits_of_probabilities(std::vector<double>(ev.data(), ev.data() + ev.size()), nullptr);
}

// ---------------------------------------------------------------------------

MomentumSpace::MomentumSpace(const GridSpec& spec)
    : spec_(spec),
      k_A_(fft_wavenumbers(spec.n_A, spec.length_A)),
      k_B_(fft_wavenumbers(spec.n_B, spec.length_B)),
      scratch_(spec.n_A, spec.n_B),
      plan_(FftPlan::two_d(spec.n_A, spec.n_B, scratch_.data())) {}

Observables MomentumSpace::observables(const ComplexGrid& grid, const PotentialSpec& potential) {
  Observables o;
  const double dxA = spec_.dx_A();
  const double dxB = spec_.dx_B();
  const RVector row_weight = grid.cwiseAbs2().rowwise().sum();
  const RVector col_weight = grid.cwiseAbs2().colwise().sum().transpose();
  const double total = row_weight.sum();
  o.norm = total * dxA * dxB;
  for (int i = 0; i < spec_.n_A; ++i) o.mean_x_A += spec_.x_A(i) * row_weight(i);
  for (int j = 0; j < spec_.n_B; ++j) o.mean_x_B += spec_.x_B(j) * col_weight(j);
  o.mean_x_A /= total;
  o.mean_x_B /= total;

  double v = 0.0;
  if (!potential.is_zero()) {
    for (int i = 0; i < spec_.n_A; ++i)
      for (int j = 0; j < spec_.n_B; ++j)
        v += std::norm(grid(i, j)) * potential(minimal_image(spec_.x_A(i) - spec_.x_B(j), spec_.length_A));
    v /= total;
  }
  o.potential = v;

  scratch_ = grid;
  plan_.forward();
  const RVector krow = scratch_.cwiseAbs2().rowwise().sum();
  const RVector kcol = scratch_.cwiseAbs2().colwise().sum().transpose();
  const double ktotal = krow.sum();
  double kin_A = 0.0;
  double kin_B = 0.0;
  for (int i = 0; i < spec_.n_A; ++i) {
    const double k = k_A_[static_cast<std::size_t>(i)];
    o.mean_p_A += k * krow(i);
    kin_A += k * k * krow(i);
  }
  for (int j = 0; j < spec_.n_B; ++j) {
    const double k = k_B_[static_cast<std::size_t>(j)];
    o.mean_p_B += k * kcol(j);
    kin_B += k * k * kcol(j);
  }
  o.mean_p_A /= ktotal;
  o.mean_p_B /= ktotal;
  o.kinetic = (std::isinf(spec_.m_A) ? 0.0 : kin_A / (2.0 * spec_.m_A) / ktotal) +
              (std::isinf(spec_.m_B) ? 0.0 : kin_B / (2.0 * spec_.m_B) / ktotal);
  o.energy = o.kinetic + o.potential;
  return o;
}

Observables ehrenfest_observables(const Wavefunction2P& psi, const PotentialSpec& potential) {
  MomentumSpace ms(psi.spec());
  return ms.observables(psi.grid(), potential);
}

// ---------------------------------------------------------------------------

double GridTrajectory::max_entropy_bits() const {
  double m = 0.0;
  for (const GridSample& s : samples) m = std::max(m, s.entropy_bits);
  return m;
}

double GridTrajectory::norm_drift() const {
  double m = 0.0;
  for (const GridSample& s : samples) m = std::max(m, std::abs(s.norm - samples.front().norm));
  return m;
}

double GridTrajectory::relative_energy_drift() const {
  double m = 0.0;
  const double e0 = samples.front().energy;
  for (const GridSample& s : samples) m = std::max(m, std::abs(s.energy - e0));
  return m / std::abs(e0);
}

SplitStepPropagator::SplitStepPropagator(const GridSpec& spec, const PotentialSpec& potential, double dt)
    : spec_(spec),
      dt_(dt),
      kinetic_phase_(spec.n_A, spec.n_B),
      half_potential_phase_(spec.n_A, spec.n_B),
      work_(spec.n_A, spec.n_B),
      plan_(FftPlan::two_d(spec.n_A, spec.n_B, work_.data())) {
  spec_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (dt * potential.max_abs() > kMaxPotentialPhase) {
    throw InvalidArgument("time step too large: potential phase per step " +
                          std::to_string(dt * potential.max_abs()) + " exceeds " +
                          std::to_string(kMaxPotentialPhase) + " rad");
  }
  if (!potential.is_zero() && spec_.length_A != spec_.length_B) {
    throw InvalidArgument("an interaction needs equal box lengths for both particles");
  }
  const std::vector<double> k_A = fft_wavenumbers(spec.n_A, spec.length_A);
  const std::vector<double> k_B = fft_wavenumbers(spec.n_B, spec.length_B);
  const double inv_size = 1.0 / (static_cast<double>(spec.n_A) * spec.n_B);
  const double inv_2m_A = std::isinf(spec.m_A) ? 0.0 : 1.0 / (2.0 * spec.m_A);
  const double inv_2m_B = std::isinf(spec.m_B) ? 0.0 : 1.0 / (2.0 * spec.m_B);
  for (int i = 0; i < spec.n_A; ++i) {
    const double ka = k_A[static_cast<std::size_t>(i)];
    for (int j = 0; j < spec.n_B; ++j) {
      const double kb = k_B[static_cast<std::size_t>(j)];
      const double energy = ka * ka * inv_2m_A + kb * kb * inv_2m_B;
      // Folds the 1/N of the inverse transform into the kinetic factor.
      kinetic_phase_(i, j) = std::polar(inv_size, -energy * dt);
      const double v = potential.is_zero()
                           ? 0.0
                           : potential(minimal_image(spec.x_A(i) - spec.x_B(j), spec.length_A));
      half_potential_phase_(i, j) = std::polar(1.0, -0.5 * v * dt);
    }
  }
}

void SplitStepPropagator::advance(ComplexGrid& grid, int n) {
  if (grid.rows() != spec_.n_A || grid.cols() != spec_.n_B) throw DimensionMismatch("advance: grid shape mismatch");
  work_ = grid;
  for (int s = 0; s < n; ++s) {
    work_.array() *= half_potential_phase_.array();
    plan_.forward();
    work_.array() *= kinetic_phase_.array();
    plan_.inverse();
    work_.array() *= half_potential_phase_.array();
  }
  grid = work_;
}

GridTrajectory evolve_split_step(const Wavefunction2P& psi, const PotentialSpec& potential, double dt, int n_steps,
                                 int sample_every, const SplitStepOptions& options) {
  if (n_steps < 1) throw InvalidArgument("n_steps must be positive");
  if (sample_every < 1) throw InvalidArgument("sample_every must be positive");
  const GridSpec& spec = psi.spec();
  SplitStepPropagator prop(spec, potential, dt);
  MomentumSpace ms(spec);

  GridTrajectory traj{{}, psi};
  ComplexGrid grid = psi.grid();

  auto record = [&](int step) {
    const Observables o = ms.observables(grid, potential);
    if (!std::isfinite(o.norm) || !std::isfinite(o.energy) || std::abs(o.norm - 1.0) > 1e-6) {
      throw NumericalFailure("split-step evolution diverged at step " + std::to_string(step) + " (t = " +
                             std::to_string(step * dt) + "): norm " + std::to_string(o.norm) + ", energy " +
                             std::to_string(o.energy));
    }
    GridSample s;
    s.time = step * dt;
    s.norm = o.norm;
    s.energy = o.energy;
    s.mean_x_A = o.mean_x_A;
    s.mean_x_B = o.mean_x_B;
    s.mean_p_A = o.mean_p_A;
    s.mean_p_B = o.mean_p_B;
    const bool need_state = options.track_entropy || static_cast<bool>(options.on_sample);
    if (need_state) {
      Wavefunction2P current(grid, spec, 1e-6);
      if (options.track_entropy) {
        const GridEntropy e = entanglement_entropy_grid(current, options.rank_bound);
        s.entropy_bits = e.bits;
        s.entropy_normalized = e.normalized;
      }
      if (options.on_sample) options.on_sample(step, current);
    }
    traj.samples.push_back(s);
  };

  record(0);
  int step = 0;
  while (step < n_steps) {
    const int chunk = std::min(sample_every, n_steps - step);
    prop.advance(grid, chunk);
    step += chunk;
    record(step);
  }
  traj.final_state = Wavefunction2P(std::move(grid), spec, 1e-6);
  return traj;
}

}  // namespace entlab
