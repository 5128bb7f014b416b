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


#include <doctest.h>

#include <cmath>
#include <limits>

#include "entlab/io.hpp"
#include "entlab/islands.hpp"
#include "oracles.hpp"

using namespace entlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridSpec small_grid(double m_A = 1.0, double m_B = 1.0) {
  GridSpec g;
  g.n_A = g.n_B = 64;
  g.length_A = g.length_B = 32.0;
  g.m_A = m_A;
  g.m_B = m_B;
  return g;
}

PotentialSpec well(double s, double w) {
  PotentialSpec v;
  v.kind = PotentialKind::kGaussianWell;
  v.strength = s;
  v.width = w;
  return v;
}

IslandFixture small_fixture() {
  IslandFixture f;
  f.grid = small_grid(1.0, 1.0);
  f.packet_A = {-5.0, 1.0, 2.0};
  f.packet_B = {5.0, 1.0, -2.0};
  f.potential = well(1.0, 1.0);
  f.dt = 0.01;
  f.n_steps = 500;
  f.sample_every = 50;
  return f;
}

oracle::CVec to_vec(const CVector& v) { return oracle::CVec(v.data(), v.data() + v.size()); }

double max_diff(const CVector& a, const oracle::CVec& b) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a(i) - b[static_cast<std::size_t>(i)]));
  return e;
}

std::vector<double> density(const CVector& psi) {
  std::vector<double> rho(static_cast<std::size_t>(psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) rho[static_cast<std::size_t>(i)] = std::norm(psi(i));
  return rho;
}

}  // namespace

TEST_CASE("HartreePair construction and validation") {
  const HartreePair p = HartreePair::from_packets({-2, 1, 0}, {2, 1, 0}, small_grid());
  CHECK(std::abs(p.norm_A() - 1.0) < 1e-12);
  CHECK(std::abs(p.norm_B() - 1.0) < 1e-12);
  CHECK_NOTHROW(p.validate());
  HartreePair bad = p;
  bad.psi_A *= 1.01;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.psi_B.resize(32);
  CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
}

TEST_CASE("Hartree requires identical grids") {
  GridSpec g = small_grid();
  g.n_B = 32;
  CHECK_THROWS_AS(HartreePropagator(g, well(1, 1), 0.01), GridMismatch);
  g = small_grid();
  g.length_B = 30.0;
  CHECK_THROWS_AS(HartreePropagator(g, well(1, 1), 0.01), GridMismatch);
  CHECK_THROWS_AS(HartreePropagator(small_grid(), well(1, 1), 0.5), InvalidArgument);

  const Wavefunction2P full = init_product({0, 1, 0}, {0, 1, 0}, small_grid());
  GridSpec other = small_grid();
  other.length_A = other.length_B = 30.0;
  CHECK_THROWS_AS(hartree_fidelity(full, HartreePair::from_packets({0, 1, 0}, {0, 1, 0}, other)), GridMismatch);
}

TEST_CASE("decoupled Hartree evolution equals free single-particle evolution") {
  const GridSpec g = small_grid(1.0, 3.0);
  const GaussianPacket pa{-4, 1.0, 1.5}, pb{3, 1.2, -0.5};
  const HartreeTrajectory t = hartree_evolve(HartreePair::from_packets(pa, pb, g), well(0, 1), 0.01, 200, 100);
  REQUIRE(t.states.size() == 3);
  CHECK(t.times.back() == doctest::Approx(2.0));
  const auto a = oracle::free_evolve(to_vec(packet_on_grid(pa, 64, 32.0)), 32.0, 1.0, 2.0);
  const auto b = oracle::free_evolve(to_vec(packet_on_grid(pb, 64, 32.0)), 32.0, 3.0, 2.0);
  CHECK(max_diff(t.states.back().psi_A, a) < 1e-10);
  CHECK(max_diff(t.states.back().psi_B, b) < 1e-10);
}

TEST_CASE("a frozen partner acts as a static convolved potential") {
  const GridSpec g = small_grid(1.0, kInf);
  const GaussianPacket pa{-6, 1.0, 2.0}, pb{0, 0.5, 0.0};
  const PotentialSpec v = well(2.0, 1.0);
  const double dt = 0.01;
  const int steps = 200;
  const HartreeTrajectory t = hartree_evolve(HartreePair::from_packets(pa, pb, g), v, dt, steps, steps);

  const std::vector<double> rho_B = density(packet_on_grid(pb, 64, 32.0));
  std::vector<double> v_eff(64);
  for (int i = 0; i < 64; ++i) v_eff[static_cast<std::size_t>(i)] = oracle::direct_convolution(rho_B, v, g.x_A(i), 32.0);
  const auto expect = oracle::split_step_1d(to_vec(packet_on_grid(pa, 64, 32.0)), v_eff, 32.0, 1.0, dt, steps);
  CHECK(max_diff(t.states.back().psi_A, expect) < 1e-8);
  // B's density is untouched.
  const std::vector<double> rho_B_end = density(t.states.back().psi_B);
  for (int j = 0; j < 64; ++j) CHECK(std::abs(rho_B_end[j] - rho_B[j]) < 1e-12);
}

TEST_CASE("effective potentials match direct quadrature on the collision fixture") {
  const EvolveConfig c = parse_evolve_config(oracle::load_fixture("collision.json").at("config"));
  HartreePair pair = HartreePair::from_packets(c.packet_A, c.packet_B, c.grid);
  HartreePropagator prop(c.grid, c.potential, c.dt);
  prop.advance(pair, 400);
  const EffectivePotentials eff = prop.effective_potentials(pair);
  const std::vector<double> rho_A = density(pair.psi_A), rho_B = density(pair.psi_B);
  SplitMix64 rng(10);
  for (int k = 0; k < 10; ++k) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.grid.n_A)));
    CHECK(std::abs(eff.on_A(i) - oracle::direct_convolution(rho_B, c.potential, c.grid.x_A(i), c.grid.length_A)) <
          1e-10);
    CHECK(std::abs(eff.on_B(i) - oracle::direct_convolution(rho_A, c.potential, c.grid.x_B(i), c.grid.length_B)) <
          1e-10);
  }
}

TEST_CASE("Hartree factors stay normalized") {
  const IslandFixture f = small_fixture();
  const HartreeTrajectory t =
      hartree_evolve(HartreePair::from_packets(f.packet_A, f.packet_B, f.grid), f.potential, f.dt, 1000, 100);
  for (const HartreePair& p : t.states) {
    CHECK(std::abs(p.norm_A() - 1.0) < 1e-8);
    CHECK(std::abs(p.norm_B() - 1.0) < 1e-8);
  }
}

TEST_CASE("hartree_fidelity") {
  const GridSpec g = small_grid();
  const GaussianPacket pa{-5, 1, 2}, pb{5, 1, -2};
  CHECK(std::abs(hartree_fidelity(init_product(pa, pb, g), HartreePair::from_packets(pa, pb, g)) - 1.0) < 1e-10);
  CHECK(hartree_fidelity(init_product(pa, pb, g), HartreePair::from_packets(pb, pa, g)) < 1e-6);

  IslandFixture f = small_fixture();
  f.potential.strength = 0.0;
  const ScanPoint free = run_island_point(f);
  CHECK(free.min_fidelity > 1 - 1e-8);
  CHECK(free.max_entropy_bits < 1e-10);
  for (const IslandSample& s : free.samples) CHECK(std::abs(s.fidelity - 1.0) < 1e-8);
}

TEST_CASE("RK4 two-body integrator") {
  const PotentialSpec v = well(1.0, 2.0);
  const ClassicalState s0{-4.0, 3.0, 1.5, -0.5};
  const auto path = rk4_two_body(s0, v, 1.0, 2.0, 0.0005, 20000);
  REQUIRE(path.size() == 20001);
  const double e0 = classical_energy(s0, v, 1.0, 2.0);
  double drift = 0.0, p0 = s0.p_A + s0.p_B, p_drift = 0.0;
  for (const ClassicalState& s : path) {
    drift = std::max(drift, std::abs(classical_energy(s, v, 1.0, 2.0) - e0) / std::abs(e0));
    p_drift = std::max(p_drift, std::abs(s.p_A + s.p_B - p0));
  }
  CHECK(drift < 1e-8);
  CHECK(p_drift < 1e-10);

  // Fourth order: halving the step cuts the error about 16 times.
  auto error = [&](double h) {
    const ClassicalState e = rk4_two_body(s0, v, 1.0, 2.0, h, static_cast<int>(std::lround(10.0 / h))).back();
    const ClassicalState& r = path.back();
    return std::hypot(std::hypot(e.x_A - r.x_A, e.x_B - r.x_B), std::hypot(e.p_A - r.p_A, e.p_B - r.p_B));
  };
  const double order = std::log2(error(0.01) / error(0.005));
  CHECK(order > 3.7);
  CHECK(order < 4.3);

  const auto free = rk4_two_body(s0, well(0, 1), 2.0, 1.0, 0.01, 100);
  CHECK(free.back().x_A == doctest::Approx(-4.0 + 0.75).epsilon(1e-12));
  CHECK(free.back().x_B == doctest::Approx(3.0 - 0.5).epsilon(1e-12));

  const auto pinned = rk4_two_body({-1.0, 0.0, 1.0, 0.0}, v, 1.0, kInf, 0.01, 300);
  for (const ClassicalState& s : pinned) CHECK(s.x_B == 0.0);
  CHECK(pinned.back().x_A != -1.0);
}

TEST_CASE("run_island_point bookkeeping") {
  const IslandFixture f = small_fixture();
  const ScanPoint p = run_island_point(f, 0.5);
  CHECK(p.parameter == 0.5);
  REQUIRE(p.samples.size() == 11);
  CHECK(p.samples.front().time == 0.0);
  CHECK(p.samples.back().time == doctest::Approx(5.0));
  CHECK(std::abs(p.samples.front().fidelity - 1.0) < 1e-10);
  CHECK(p.samples.front().classical_x_A == f.packet_A.center);
  double max_s = 0.0, min_f = 1.0, dev = 0.0;
  for (const IslandSample& s : p.samples) {
    max_s = std::max(max_s, s.entropy_bits);
    min_f = std::min(min_f, s.fidelity);
    dev = std::max({dev, std::abs(s.mean_x_A - s.classical_x_A), std::abs(s.mean_x_B - s.classical_x_B)});
  }
  CHECK(p.max_entropy_bits == max_s);
  CHECK(p.min_fidelity == min_f);
  CHECK(p.final_fidelity == p.samples.back().fidelity);
  CHECK(p.trajectory_deviation == doctest::Approx(dev));
  CHECK(p.norm_drift < 1e-10);
  CHECK(p.energy_drift < 1e-4);
  CHECK(p.classical_energy_drift < 1e-8);
  CHECK(p.min_fidelity >= 1 - 2 * p.max_entropy_bits);
}

TEST_CASE("relabelling A and B leaves the entropy unchanged") {
  IslandFixture f = small_fixture();
  f.grid.m_B = 2.0;
  f.packet_B = {4.0, 1.3, -1.0};
  const IslandFixture s = f.swapped();
  CHECK(s.grid.m_A == 2.0);
  CHECK(s.packet_A.center == 4.0);
  CHECK(s.packet_B.center == -5.0);
  const ScanPoint a = run_island_point(f);
  const ScanPoint b = run_island_point(s);
  CHECK(std::abs(a.max_entropy_bits - b.max_entropy_bits) < 1e-9);
  CHECK(std::abs(a.final_fidelity - b.final_fidelity) < 1e-9);
}

TEST_CASE("scans validate ratios, sort by parameter and ignore thread count") {
  IslandFixture f = small_fixture();
  f.n_steps = 100;
  CHECK_THROWS_AS(test_particle_scan({1.0, 0.0}, f, 1), InvalidArgument);
  CHECK_THROWS_AS(test_particle_scan({}, f, 1), InvalidArgument);
  CHECK_THROWS_AS(material_point_scan({0.5, 1.0}, f, 1), InvalidArgument);

  const RegimeScanResult one = test_particle_scan({1.0, 0.1, 0.3}, f, 4, 1);
  const RegimeScanResult many = test_particle_scan({1.0, 0.1, 0.3}, f, 4, 3);
  CHECK(one.kind == "test_particle");
  CHECK(one.seed == 4);
  REQUIRE(one.points.size() == 3);
  CHECK(one.points[0].parameter == 0.1);
  CHECK(one.points[2].parameter == 1.0);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(one.points[k].max_entropy_bits == many.points[k].max_entropy_bits);
    CHECK(one.points[k].final_fidelity == many.points[k].final_fidelity);
    CHECK(one.points[k].trajectory_deviation == many.points[k].trajectory_deviation);
  }

  const RegimeScanResult mp = material_point_scan({0.3, 0.15}, f, 0, 2);
  CHECK(mp.kind == "material_point");
  CHECK(mp.points[0].parameter == 0.15);
}

TEST_CASE("test-particle fixture oracle is converged and ordered") {
  const Json o = oracle::load_fixture("test_particle.json").at("oracle");
  const Json& pts = o.at("points");
  const Json& base = o.at("base_points");
  REQUIRE(pts.size() == 6);
  CHECK(o.at("max_entropy_gap").get<double>() < o.at("convergence_allowance").get<double>());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double s = pts[k].at("max_entropy_bits").get<double>();
    CHECK(std::abs(s - base[k].at("max_entropy_bits").get<double>()) < 1e-4);
    CHECK(pts[k].at("min_fidelity").get<double>() >= 1 - 2 * s);
    if (k > 0) CHECK(s < pts[k - 1].at("max_entropy_bits").get<double>());
  }
  CHECK(pts[0].at("max_entropy_bits").get<double>() >= 10 * pts[5].at("max_entropy_bits").get<double>());
}

TEST_CASE("material-point fixture oracle is converged and ordered") {
  const Json o = oracle::load_fixture("material_point.json").at("oracle");
  const Json& pts = o.at("points");
  const Json& base = o.at("base_points");
  REQUIRE(pts.size() >= 3);
  CHECK(o.at("max_entropy_gap").get<double>() < o.at("convergence_allowance").get<double>());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double s = pts[k].at("max_entropy_bits").get<double>();
    CHECK(std::abs(s - base[k].at("max_entropy_bits").get<double>()) < 1e-4);
    CHECK(pts[k].at("min_fidelity").get<double>() >= 1 - 2 * s);
    if (k > 0) CHECK(s > pts[k - 1].at("max_entropy_bits").get<double>());
  }
  CHECK(pts[0].at("min_fidelity").get<double>() > 0.99);
  // The deviation threshold comes from the narrowest point, so that point must be converged.
  CHECK(std::abs(pts[0].at("trajectory_deviation").get<double>() - base[0].at("trajectory_deviation").get<double>()) <
        1e-4);
}

TEST_CASE("extreme test-particle point reproduces its stored base value") {
  const Json fixture = oracle::load_fixture("test_particle.json");
  const IslandsConfig c = parse_islands_config(fixture.at("config"));
  const Json& o = fixture.at("oracle");
  const RegimeScanResult r = test_particle_scan({o.at("extreme_parameter").get<double>()}, c.fixture, 0);
  const Json& base = o.at("base_points").back();
  CHECK(base.at("parameter").get<double>() == r.points[0].parameter);
  CHECK(std::abs(r.points[0].max_entropy_bits - base.at("max_entropy_bits").get<double>()) < 1e-12);
  CHECK(r.points[0].max_entropy_bits < o.at("entropy_threshold").get<double>());
  CHECK(r.points[0].classical_energy_drift < 1e-8);
}

TEST_CASE("narrowest material point stays classical") {
  const Json fixture = oracle::load_fixture("material_point.json");
  const IslandsConfig c = parse_islands_config(fixture.at("config"));
  const Json& o = fixture.at("oracle");
  const RegimeScanResult r = material_point_scan({o.at("extreme_parameter").get<double>()}, c.fixture, 0);
  const ScanPoint& p = r.points[0];
  CHECK(p.min_fidelity > 0.99);
  for (const IslandSample& s : p.samples) CHECK(s.fidelity > 0.99);
  CHECK(p.max_entropy_bits < o.at("entropy_threshold").get<double>());
  CHECK(p.trajectory_deviation < o.at("deviation_threshold").get<double>());
  CHECK(p.classical_energy_drift < 1e-8);
  CHECK(p.norm_drift < 1e-10);
  CHECK(p.energy_drift < 1e-4);
}
