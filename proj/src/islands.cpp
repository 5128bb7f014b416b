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

#include "entlab/islands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entlab/parallel.hpp"

namespace entlab {

namespace {

void require_square_grid(const GridSpec& spec) {
  spec.validate();
  if (spec.n_A != spec.n_B || spec.length_A != spec.length_B) {
    throw GridMismatch("mean-field evolution needs identical grids for both particles");
  }
}

CVector kinetic_factors(int n, double length, double mass, double dt) {
  const std::vector<double> k = fft_wavenumbers(n, length);
  const double inv_2m = std::isinf(mass) ? 0.0 : 1.0 / (2.0 * mass);
  CVector out(n);
  for (int i = 0; i < n; ++i) {
    const double ki = k[static_cast<std::size_t>(i)];
    out(i) = std::polar(1.0 / n, -ki * ki * inv_2m * dt);
  }
  return out;
}

}  // namespace

HartreePair HartreePair::from_packets(const GaussianPacket& packet_A, const GaussianPacket& packet_B,
                                      const GridSpec& spec) {
  spec.validate();
  return HartreePair{packet_on_grid(packet_A, spec.n_A, spec.length_A),
                     packet_on_grid(packet_B, spec.n_B, spec.length_B), spec};
}

double HartreePair::norm_A() const { return psi_A.squaredNorm() * spec.dx_A(); }
double HartreePair::norm_B() const { return psi_B.squaredNorm() * spec.dx_B(); }

void HartreePair::validate(double tol) const {
  spec.validate();
  if (psi_A.size() != spec.n_A || psi_B.size() != spec.n_B) {
    throw DimensionMismatch("Hartree factors do not match the grid");
  }
  if (!(std::abs(norm_A() - 1.0) <= tol) || !(std::abs(norm_B() - 1.0) <= tol)) {
    throw InvalidArgument("Hartree factors must be normalized (norms " + std::to_string(norm_A()) + ", " +
                          std::to_string(norm_B()) + ")");
  }
}

HartreePropagator::HartreePropagator(const GridSpec& spec, const PotentialSpec& potential, double dt)
    : spec_(spec),
      dt_(dt),
      interacting_(!potential.is_zero()),
      buffer_(spec.n_A),
      plan_(FftPlan::one_d(spec.n_A, buffer_.data())) {
  require_square_grid(spec_);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (dt * potential.max_abs() > kMaxPotentialPhase) {
    throw InvalidArgument("time step too large: potential phase per step " +
                          std::to_string(dt * potential.max_abs()) + " exceeds " +
                          std::to_string(kMaxPotentialPhase) + " rad");
  }
  const int n = spec_.n_A;
  const double dx = spec_.dx_A();
  kinetic_A_ = kinetic_factors(n, spec_.length_A, spec_.m_A, dt);
  kinetic_B_ = kinetic_factors(n, spec_.length_B, spec_.m_B, dt);
  if (!interacting_) return;

  // x_i - y_j = (i - j) dx, so V_eff,A = dx K * rho_B with K[m] = V(mi(m dx)),
  // and V_eff,B uses the reflected kernel K[-m].
  for (int pass = 0; pass < 2; ++pass) {
    for (int m = 0; m < n; ++m) {
      const int shift = pass == 0 ? m : (n - m) % n;
      buffer_(m) = potential(minimal_image(shift * dx, spec_.length_A)) * dx / n;
    }
    plan_.forward();
    (pass == 0 ? kernel_A_hat_ : kernel_B_hat_) = buffer_;
  }
}

RVector HartreePropagator::convolve(const RVector& density, const CVector& kernel_hat) {
  buffer_ = density.cast<cd>();
  plan_.forward();
  buffer_.array() *= kernel_hat.array();
  plan_.inverse();
  return buffer_.real();
}

EffectivePotentials HartreePropagator::effective_potentials(const HartreePair& pair) {
  EffectivePotentials v;
  if (!interacting_) {
    v.on_A = RVector::Zero(spec_.n_A);
    v.on_B = RVector::Zero(spec_.n_B);
    return v;
  }
  v.on_A = convolve(pair.psi_B.cwiseAbs2(), kernel_A_hat_);
  v.on_B = convolve(pair.psi_A.cwiseAbs2(), kernel_B_hat_);
  return v;
}

void HartreePropagator::kinetic(CVector& psi, const CVector& phase) {
  buffer_ = psi;
  plan_.forward();
  buffer_.array() *= phase.array();
  plan_.inverse();
  psi = buffer_;
}

void HartreePropagator::advance(HartreePair& pair, int n) {
  if (pair.spec != spec_) throw GridMismatch("Hartree pair and propagator use different grids");
  auto half_kick = [&](const EffectivePotentials& v) {
    for (int i = 0; i < spec_.n_A; ++i) pair.psi_A(i) *= std::polar(1.0, -0.5 * dt_ * v.on_A(i));
    for (int j = 0; j < spec_.n_B; ++j) pair.psi_B(j) *= std::polar(1.0, -0.5 * dt_ * v.on_B(j));
  };
  for (int s = 0; s < n; ++s) {
    // The half kick leaves both densities unchanged, so the potentials computed
    // before it are also the ones the kick sees after.
    if (interacting_) half_kick(effective_potentials(pair));
    kinetic(pair.psi_A, kinetic_A_);
    kinetic(pair.psi_B, kinetic_B_);
    if (interacting_) half_kick(effective_potentials(pair));
  }
}

HartreeTrajectory hartree_evolve(const HartreePair& pair, const PotentialSpec& potential, double dt, int n_steps,
                                 int sample_every) {
  if (n_steps < 1) throw InvalidArgument("n_steps must be positive");
  if (sample_every < 1) throw InvalidArgument("sample_every must be positive");
  pair.validate();
  HartreePropagator prop(pair.spec, potential, dt);
  HartreeTrajectory traj;
  HartreePair current = pair;
  auto record = [&](int step) {
    const double na = current.norm_A();
    const double nb = current.norm_B();
    if (!std::isfinite(na) || !std::isfinite(nb) || std::abs(na - 1.0) > 1e-6 || std::abs(nb - 1.0) > 1e-6) {
      throw NumericalFailure("mean-field evolution diverged at step " + std::to_string(step));
    }
    traj.times.push_back(step * dt);
    traj.states.push_back(current);
  };
  record(0);
  int step = 0;
  while (step < n_steps) {
    const int chunk = std::min(sample_every, n_steps - step);
    prop.advance(current, chunk);
    step += chunk;
    record(step);
  }
  return traj;
}

double hartree_fidelity(const Wavefunction2P& full, const HartreePair& pair) {
  if (full.spec() != pair.spec) throw GridMismatch("fidelity: wavefunction and Hartree pair use different grids");
  const ComplexGrid& g = full.grid();
  const cd overlap = (pair.psi_A.transpose() * g.conjugate() * pair.psi_B)(0, 0);
  return std::norm(overlap * (pair.spec.dx_A() * pair.spec.dx_B()));
}

// ---------------------------------------------------------------------------

double classical_energy(const ClassicalState& s, const PotentialSpec& potential, double m_A, double m_B) {
  const double t_A = std::isinf(m_A) ? 0.0 : s.p_A * s.p_A / (2.0 * m_A);
  const double t_B = std::isinf(m_B) ? 0.0 : s.p_B * s.p_B / (2.0 * m_B);
  return t_A + t_B + potential(s.x_A - s.x_B);
}

std::vector<ClassicalState> rk4_two_body(const ClassicalState& initial, const PotentialSpec& potential, double m_A,
                                         double m_B, double dt, int n_steps) {
  if (!(m_A > 0.0) || !(m_B > 0.0)) throw InvalidArgument("masses must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (n_steps < 0) throw InvalidArgument("n_steps must be non-negative");
  const double inv_m_A = std::isinf(m_A) ? 0.0 : 1.0 / m_A;
  const double inv_m_B = std::isinf(m_B) ? 0.0 : 1.0 / m_B;
  auto rhs = [&](const ClassicalState& s) {
    const double f = -potential.derivative(s.x_A - s.x_B);
    return ClassicalState{s.p_A * inv_m_A, s.p_B * inv_m_B, f, -f};
  };
  auto axpy = [](const ClassicalState& s, double h, const ClassicalState& d) {
    return ClassicalState{s.x_A + h * d.x_A, s.x_B + h * d.x_B, s.p_A + h * d.p_A, s.p_B + h * d.p_B};
  };
  std::vector<ClassicalState> out;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.push_back(initial);
  ClassicalState s = initial;
  for (int k = 0; k < n_steps; ++k) {
    const ClassicalState k1 = rhs(s);
    const ClassicalState k2 = rhs(axpy(s, 0.5 * dt, k1));
    const ClassicalState k3 = rhs(axpy(s, 0.5 * dt, k2));
    const ClassicalState k4 = rhs(axpy(s, dt, k3));
    s.x_A += dt / 6.0 * (k1.x_A + 2.0 * k2.x_A + 2.0 * k3.x_A + k4.x_A);
    s.x_B += dt / 6.0 * (k1.x_B + 2.0 * k2.x_B + 2.0 * k3.x_B + k4.x_B);
    s.p_A += dt / 6.0 * (k1.p_A + 2.0 * k2.p_A + 2.0 * k3.p_A + k4.p_A);
    s.p_B += dt / 6.0 * (k1.p_B + 2.0 * k2.p_B + 2.0 * k3.p_B + k4.p_B);
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

IslandFixture IslandFixture::swapped() const {
  IslandFixture f = *this;
  std::swap(f.grid.n_A, f.grid.n_B);
  std::swap(f.grid.length_A, f.grid.length_B);
  std::swap(f.grid.m_A, f.grid.m_B);
  std::swap(f.packet_A, f.packet_B);
  return f;
}

ScanPoint run_island_point(const IslandFixture& fixture, double parameter) {
  if (fixture.rk4_substeps < 1) throw InvalidArgument("rk4_substeps must be positive");
  const GridSpec& spec = fixture.grid;
  const Wavefunction2P psi0 = init_product(fixture.packet_A, fixture.packet_B, spec);
  const HartreeTrajectory mean_field = hartree_evolve(HartreePair::from_packets(fixture.packet_A, fixture.packet_B, spec),
                                                      fixture.potential, fixture.dt, fixture.n_steps,
                                                      fixture.sample_every);

  std::vector<double> fidelity;
  SplitStepOptions options;
  options.rank_bound = fixture.rank_bound;
  options.on_sample = [&](int, const Wavefunction2P& current) {
    fidelity.push_back(hartree_fidelity(current, mean_field.states[fidelity.size()]));
  };
  const GridTrajectory full =
      evolve_split_step(psi0, fixture.potential, fixture.dt, fixture.n_steps, fixture.sample_every, options);

  const ClassicalState start{fixture.packet_A.center, fixture.packet_B.center, fixture.packet_A.momentum,
                             fixture.packet_B.momentum};
  const double h = fixture.dt / fixture.rk4_substeps;
  const std::vector<ClassicalState> path =
      rk4_two_body(start, fixture.potential, spec.m_A, spec.m_B, h, fixture.n_steps * fixture.rk4_substeps);

  ScanPoint p;
  p.parameter = parameter;
  p.min_fidelity = 1.0;
  const double e0 = classical_energy(start, fixture.potential, spec.m_A, spec.m_B);
  for (const ClassicalState& s : path) {
    const double de = std::abs(classical_energy(s, fixture.potential, spec.m_A, spec.m_B) - e0);
    p.classical_energy_drift = std::max(p.classical_energy_drift, e0 != 0.0 ? de / std::abs(e0) : de);
  }
  for (std::size_t k = 0; k < full.samples.size(); ++k) {
    const GridSample& g = full.samples[k];
    const auto step = static_cast<std::size_t>(std::lround(g.time / fixture.dt));
    const ClassicalState& c = path[step * static_cast<std::size_t>(fixture.rk4_substeps)];
    IslandSample s;
    s.time = g.time;
    s.norm = g.norm;
    s.energy = g.energy;
    s.entropy_bits = g.entropy_bits;
    s.fidelity = fidelity[k];
    s.mean_x_A = g.mean_x_A;
    s.mean_x_B = g.mean_x_B;
    s.classical_x_A = c.x_A;
    s.classical_x_B = c.x_B;
    p.min_fidelity = std::min(p.min_fidelity, s.fidelity);
    p.trajectory_deviation =
        std::max({p.trajectory_deviation, std::abs(s.mean_x_A - c.x_A), std::abs(s.mean_x_B - c.x_B)});
    p.samples.push_back(s);
  }
  p.max_entropy_bits = full.max_entropy_bits();
  p.final_fidelity = fidelity.back();
  p.norm_drift = full.norm_drift();
  p.energy_drift = full.relative_energy_drift();
  return p;
}

namespace {

RegimeScanResult run_scan(std::string kind, const std::vector<IslandFixture>& fixtures,
                          const std::vector<double>& parameters, std::uint64_t seed, int threads) {
  RegimeScanResult r;
  r.kind = std::move(kind);
  r.seed = seed;
  r.points.resize(fixtures.size());
  parallel_for(static_cast<int>(fixtures.size()), threads, [&](int k) {
    const auto i = static_cast<std::size_t>(k);
    r.points[i] = run_island_point(fixtures[i], parameters[i]);
  });
  std::stable_sort(r.points.begin(), r.points.end(),
                   [](const ScanPoint& a, const ScanPoint& b) { return a.parameter < b.parameter; });
  return r;
}

}  // namespace

RegimeScanResult test_particle_scan(const std::vector<double>& mass_ratios, const IslandFixture& base,
                                    std::uint64_t seed, int threads) {
  if (mass_ratios.empty()) throw InvalidArgument("test_particle_scan: no mass ratios given");
  std::vector<IslandFixture> fixtures;
  for (double ratio : mass_ratios) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      throw InvalidArgument("mass ratio must be positive and finite (got " + std::to_string(ratio) + ")");
    }
    IslandFixture f = base;
    f.grid.m_B = f.grid.m_A / ratio;
    f.packet_B.momentum = 0.0;
    f.packet_B.sigma = 4.0 * f.grid.dx_B();
    fixtures.push_back(f);
  }
  return run_scan("test_particle", fixtures, mass_ratios, seed, threads);
}

RegimeScanResult material_point_scan(const std::vector<double>& width_ratios, const IslandFixture& base,
                                     std::uint64_t seed, int threads) {
  if (width_ratios.empty()) throw InvalidArgument("material_point_scan: no width ratios given");
  std::vector<IslandFixture> fixtures;
  for (double ratio : width_ratios) {
    if (!(ratio > 0.0) || !(ratio < 1.0)) {
      throw InvalidArgument("width ratio must lie in (0, 1) (got " + std::to_string(ratio) + ")");
    }
    IslandFixture f = base;
    f.packet_A.sigma = ratio * base.potential.width;
    f.packet_B.sigma = ratio * base.potential.width;
    fixtures.push_back(f);
  }
  return run_scan("material_point", fixtures, width_ratios, seed, threads);
}

}  // namespace entlab
