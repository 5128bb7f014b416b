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

// Regenerates the "oracle" block of a fixture file.
//
//   entlab_oracle tests/fixtures/collision.json [--write]
//
// Each fixture is re-run at twice the grid resolution (same box) and half the
// time step. Without --write the result is printed and the file is untouched.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "entlab/io.hpp"
#include "entlab/islands.hpp"

namespace {

using entlab::Json;

// Margin added to oracle values when they become pass/fail thresholds; it is the
// convergence allowance the solver is held to (dt halved and grid doubled).
constexpr double kConvergenceAllowance = 1e-4;

entlab::GridSpec refine(entlab::GridSpec g) {
  g.n_A *= 2;
  g.n_B *= 2;
  return g;
}

double final_entropy(const entlab::EvolveConfig& c) {
  const auto psi = entlab::init_product(c.packet_A, c.packet_B, c.grid);
  entlab::SplitStepOptions o;
  o.rank_bound = c.rank_bound;
  return entlab::evolve_split_step(psi, c.potential, c.dt, c.n_steps, c.sample_every, o).samples.back().entropy_bits;
}

Json evolve_oracle(const Json& config) {
  entlab::EvolveConfig base = entlab::parse_evolve_config(config);
  entlab::EvolveConfig fine = base;
  fine.grid = refine(base.grid);
  fine.dt = base.dt / 2;
  fine.n_steps = base.n_steps * 2;
  fine.sample_every = base.sample_every * 2;
  entlab::EvolveConfig finer_dt = fine;
  finer_dt.dt = fine.dt / 2;
  finer_dt.n_steps = fine.n_steps * 2;
  finer_dt.sample_every = fine.sample_every * 2;

  const double s_base = final_entropy(base);
  const double s_fine = final_entropy(fine);
  const double s_finer = final_entropy(finer_dt);
  // Second order in dt: S(dt) ~ S* + c dt^2.
  const double richardson = s_finer + (s_finer - s_fine) / 3.0;
  return Json{{"final_entropy_bits", s_fine},
              {"base_final_entropy_bits", s_base},
              {"quarter_dt_final_entropy_bits", s_finer},
              {"richardson_final_entropy_bits", richardson},
              {"richardson_gap", std::abs(richardson - s_fine)}};
}

// Fixtures for one scan point, mirroring test_particle_scan / material_point_scan
// but keeping every physical width fixed when the grid is refined.
entlab::IslandFixture scan_fixture(const entlab::IslandsConfig& c, double ratio) {
  entlab::IslandFixture f = c.fixture;
  if (c.scan == entlab::ScanKind::kTestParticle) {
    f.grid.m_B = f.grid.m_A / ratio;
    f.packet_B.momentum = 0.0;
    f.packet_B.sigma = 4.0 * f.grid.dx_B();
  } else {
    f.packet_A.sigma = ratio * f.potential.width;
    f.packet_B.sigma = ratio * f.potential.width;
  }
  return f;
}

entlab::IslandFixture refine(entlab::IslandFixture f) {
  f.grid = refine(f.grid);
  f.dt /= 2;
  f.n_steps *= 2;
  f.sample_every *= 2;
  return f;
}

Json point_json(const entlab::ScanPoint& p) {
  return Json{{"parameter", p.parameter},
              {"max_entropy_bits", p.max_entropy_bits},
              {"final_fidelity", p.final_fidelity},
              {"min_fidelity", p.min_fidelity},
              {"trajectory_deviation", p.trajectory_deviation}};
}

Json islands_oracle(const Json& config) {
  const entlab::IslandsConfig c = entlab::parse_islands_config(config);
  Json fine_points = Json::array();
  Json base_points = Json::array();
  double max_gap = 0.0;
  for (double r : c.ratios) {
    const entlab::IslandFixture f = scan_fixture(c, r);
    const entlab::ScanPoint base = entlab::run_island_point(f, r);
    const entlab::ScanPoint fine = entlab::run_island_point(refine(f), r);
    std::fprintf(stderr, "  ratio %g: S %.10g -> %.10g, dev %.6g -> %.6g\n", r, base.max_entropy_bits,
                 fine.max_entropy_bits, base.trajectory_deviation, fine.trajectory_deviation);
    max_gap = std::max(max_gap, std::abs(base.max_entropy_bits - fine.max_entropy_bits));
    fine_points.push_back(point_json(fine));
    base_points.push_back(point_json(base));
  }

  // Thresholds refer to the extreme ladder point: the smallest ratio for both scans.
  std::size_t extreme = 0;
  for (std::size_t k = 1; k < c.ratios.size(); ++k) {
    if (c.ratios[k] < c.ratios[extreme]) extreme = k;
  }
  const Json& x = fine_points[extreme];
  Json out{{"points", fine_points},
           {"base_points", base_points},
           {"max_entropy_gap", max_gap},
           {"convergence_allowance", kConvergenceAllowance},
           {"extreme_parameter", x["parameter"]},
           {"entropy_threshold", x["max_entropy_bits"].get<double>() + kConvergenceAllowance}};
  if (c.scan == entlab::ScanKind::kMaterialPoint) {
    out["deviation_threshold"] = x["trajectory_deviation"].get<double>() + kConvergenceAllowance;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: entlab_oracle FIXTURE.json [--write]\n";
    return 2;
  }
  const std::string path = argv[1];
  const bool write = argc > 2 && std::string(argv[2]) == "--write";
  try {
    Json fixture = entlab::load_json_file(path);
    const std::string kind = fixture.at("kind").get<std::string>();
    std::cerr << "oracle for " << path << " (" << kind << ")\n";
    Json oracle;
    if (kind == "evolve") {
      oracle = evolve_oracle(fixture.at("config"));
    } else if (kind == "islands") {
      oracle = islands_oracle(fixture.at("config"));
    } else {
      std::cerr << "unknown fixture kind '" << kind << "'\n";
      return 2;
    }
    std::cout << oracle.dump(2) << "\n";
    if (write) {
      fixture["oracle"] = oracle;
      entlab::write_file(path, entlab::dump_json(fixture));
    }
  } catch (const std::exception& e) {
    std::cerr << "entlab_oracle: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
