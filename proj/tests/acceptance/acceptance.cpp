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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "entlab/bell_game.hpp"
#include "entlab/entanglement.hpp"
#include "entlab/finite_dynamics.hpp"
#include "entlab/grid.hpp"
#include "entlab/io.hpp"
#include "entlab/islands.hpp"
#include "entlab/sampling.hpp"
#include "oracles.hpp"

using namespace entlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int g_failures = 0;

void criterion(int n, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double t = seconds_since(t0);
  if (!o.pass) ++g_failures;
  std::printf("%s criterion %d: %s (%s) [%.2f s]\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.detail.c_str(), t);
  std::fflush(stdout);
}

void criterion_1(Outcome& o) {
  const double analytic = analytic_bell_sum(QuantumStrategy{});
  o.require(analytic == 0.75, "analytic quantum sum is exactly 0.75");
  const auto t0 = std::chrono::steady_clock::now();
  const double mc = bell_sum(run_game(QuantumStrategy{}, 90000, 1));
  const double t = seconds_since(t0);
  o.require(std::abs(mc - 0.75) <= 0.02, "Monte-Carlo within 0.02 of 0.75");
  o.require(t < 1.0, "Monte-Carlo runtime below 1 s");
  o.note("analytic " + num(analytic) + ", Monte-Carlo " + num(mc) + " in " + num(t) + " s");
}

void criterion_2(Outcome& o) {
  double lowest = 1e9;
  for (int i = 0; i < 8; ++i) {
    const double s = analytic_bell_sum(LhvStrategy::from_index(i));
    o.require(s == 1.0 || s == 3.0, "deterministic sum in {1, 3}");
    lowest = std::min(lowest, s);
  }
  o.require(lowest == 1.0, "minimum over deterministic lists is 1");
  SplitMix64 rng(2);
  double lowest_mix = 1e9;
  for (int k = 0; k < 100; ++k) {
    MixedLhvStrategy m;
    double total = 0.0;
    for (double& w : m.weights) total += (w = rng.uniform());
    for (double& w : m.weights) w /= total;
    lowest_mix = std::min(lowest_mix, analytic_bell_sum(m));
  }
  o.require(lowest_mix >= 1.0 - 1e-12, "every mixture at least 1 - 1e-12");
  o.note("deterministic min " + num(lowest) + ", mixture min " + num(lowest_mix));
}

void criterion_3(Outcome& o) {
  const PureState b = bell_state(0, 0);
  double worst = 0.0;
  for (double theta : {0.0, 2 * oracle::kPi / 3, 4 * oracle::kPi / 3, 0.3, 1.7, 5.9}) {
    const MeasurementDirection d(theta);
    const JointProbabilities p = joint_spin_probabilities(b, d, d);
    worst = std::max({worst, std::abs(p.uu - 0.5), std::abs(p.dd - 0.5), std::abs(p.ud), std::abs(p.du)});
  }
  o.require(worst <= 1e-12, "same-axis probabilities (1/2, 0, 0, 1/2) to 1e-12");
  SplitMix64 rng(3);
  int mismatches = 0;
  for (int k = 0; k < 100000; ++k) {
    const Question q = question_from_index(k % 3);
    mismatches += !quantum_round(rng, q, q).equal();
  }
  o.require(mismatches == 0, "no mismatches over 1e5 same-question rounds");
  o.note("max deviation " + num(worst) + ", mismatches " + std::to_string(mismatches) + "/100000");
}

void criterion_4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double bell_err = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) bell_err = std::max(bell_err, std::abs(entanglement(bell_state(r, c)) - 1.0));
  o.require(bell_err <= 1e-12, "Bell states have entanglement 1 +- 1e-12");

  SplitMix64 rng(4);
  double product_max = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int d_A = 2 + static_cast<int>(rng.below(7)), d_B = 2 + static_cast<int>(rng.below(7));
    product_max = std::max(product_max, entanglement(tensor_product(random_ket(d_A, rng), random_ket(d_B, rng))));
  }
  o.require(product_max < 1e-12, "product states below 1e-12");

  double comp = 0.0, sym = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 7;
    const PureState s = random_pure_state(d, d, rng);
    const double c_A = coherence(reduced_density_matrix(s, Subsystem::kA));
    const double c_B = coherence(reduced_density_matrix(s, Subsystem::kB));
    comp = std::max(comp, std::abs(entanglement(s) - (1.0 - c_A)));
    sym = std::max(sym, std::abs(c_A - c_B));
  }
  o.require(comp < 1e-10, "|E - (1 - C(A))| below 1e-10");
  o.require(sym < 1e-10, "|C(A) - C(B)| below 1e-10");
  const double t = seconds_since(t0);
  o.require(t < 10.0, "runtime below 10 s");
  o.note("Bell error " + num(bell_err) + ", product max " + num(product_max) + ", complementarity " + num(comp) +
         ", C(A)-C(B) " + num(sym));
}

void criterion_5(Outcome& o) {
  SplitMix64 rng(5);
  double recon = 0.0, spectrum = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int d_A = 2 + static_cast<int>(rng.below(7)), d_B = 2 + static_cast<int>(rng.below(7));
    const PureState s = random_pure_state(d_A, d_B, rng);
    const SchmidtDecomposition d = schmidt_decompose(s);
    recon = std::max(recon, (d.reconstruct() - s.amplitudes()).norm());
    const RVector ev = reduced_density_matrix(s, Subsystem::kA).eigenvalues();
    const int r = static_cast<int>(d.coefficients.size());
    for (int i = 0; i < ev.size(); ++i) {
      // Ascending eigenvalues pair with descending coefficients; the tail beyond the rank is zero.
      const int from_top = static_cast<int>(ev.size()) - 1 - i;
      const double a = from_top < r ? d.coefficients[from_top] : 0.0;
      spectrum = std::max(spectrum, std::abs(a * a - ev(i)));
    }
  }
  o.require(recon < 1e-10, "reconstruction error below 1e-10");
  o.require(spectrum < 1e-10, "coefficient^2 vs reduced eigenvalues below 1e-10");
  o.note("reconstruction " + num(recon) + ", spectrum " + num(spectrum));
}

void criterion_6(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  WitnessOptions opts;
  opts.threads = cli::resolve_threads(std::nullopt);
  SplitMix64 rng(6);
  double forward_max = 0.0;
  int flagged = 0;
  for (int k = 0; k < 100; ++k) {
    const int d_A = 2 + static_cast<int>(rng.below(3)), d_B = 2 + static_cast<int>(rng.below(3));
    const auto h = BipartiteHamiltonian::factorized(random_hermitian(d_A, rng), random_hermitian(d_B, rng));
    flagged += split_hamiltonian(h).factorized;
    forward_max = std::max(forward_max, theorem_witness(h, 50, 10.0, static_cast<std::uint64_t>(k), opts).max_entanglement);
  }
  o.require(flagged == 100, "all factorized Hamiltonians flagged");
  o.require(forward_max < 1e-8, "factorized evolution keeps entropy below 1e-8");

  double weakest = 1e9;
  int coupled = 0;
  while (coupled < 100) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const auto h = BipartiteHamiltonian::from_matrix(random_hermitian(d * d, rng), d, d);
    if (split_hamiltonian(h).residual_norm <= 0.1) continue;
    weakest = std::min(weakest, theorem_witness(h, 50, 10.0, static_cast<std::uint64_t>(1000 + coupled), opts).max_entanglement);
    ++coupled;
  }
  o.require(weakest > 1e-3, "every coupled Hamiltonian has a witness above 1e-3");
  const double t = seconds_since(t0);
  o.require(t < 300.0, "runtime below 5 min");
  o.note("factorized max entropy " + num(forward_max) + ", weakest coupled witness " + num(weakest));
}

void criterion_7(Outcome& o) {
  for (const char* name : {"collision.json", "free.json"}) {
    const EvolveConfig c = parse_evolve_config(oracle::load_fixture(name).at("config"));
    const auto t0 = std::chrono::steady_clock::now();
    SplitStepOptions so;
    so.rank_bound = c.rank_bound;
    const GridTrajectory tr =
        evolve_split_step(init_product(c.packet_A, c.packet_B, c.grid), c.potential, c.dt, c.n_steps, c.sample_every, so);
    const double t = seconds_since(t0);
    const std::string tag = std::string(name) + ": ";
    o.require(c.grid.n_A == 256 && c.grid.n_B == 256, tag + "grid is 256x256");
    // Drift is normalized to 1000 steps.
    const double per_1000 = tr.norm_drift() * 1000.0 / c.n_steps;
    o.require(per_1000 < 1e-10, tag + "norm drift below 1e-10 per 1000 steps");
    o.require(tr.relative_energy_drift() < 1e-4, tag + "relative energy drift below 1e-4");
    o.require(t < 120.0, tag + "runtime below 2 min");
    if (c.potential.is_zero()) {
      o.require(tr.max_entropy_bits() < 1e-10, tag + "V = 0 keeps entropy below 1e-10");
    }
    o.note(tag + "norm drift " + num(per_1000) + ", energy drift " + num(tr.relative_energy_drift()) +
           ", max entropy " + num(tr.max_entropy_bits()) + ", " + num(t) + " s");
  }
}

void criterion_8(Outcome& o) {
  const int threads = cli::resolve_threads(std::nullopt);
  {
    const Json f = oracle::load_fixture("test_particle.json");
    const IslandsConfig c = parse_islands_config(f.at("config"));
    const RegimeScanResult r = test_particle_scan(c.ratios, c.fixture, 0, threads);
    bool monotone = true;
    for (std::size_t k = 1; k < r.points.size(); ++k) {
      monotone = monotone && r.points[k].max_entropy_bits > r.points[k - 1].max_entropy_bits;
    }
    o.require(r.points.size() == 6 && r.points.front().parameter == 0.001 && r.points.back().parameter == 1.0,
              "test-particle ladder {1, 0.3, 0.1, 0.03, 0.01, 0.001}");
    o.require(monotone, "test-particle entropy strictly decreasing as the ratio falls");
    const double drop = r.points.back().max_entropy_bits / r.points.front().max_entropy_bits;
    o.require(drop >= 10.0, "ratio 1 vs 1e-3 reduction at least 10x");
    const double threshold = f.at("oracle").at("entropy_threshold").get<double>();
    o.require(r.points.front().max_entropy_bits < threshold, "ratio 1e-3 below the stored entropy threshold");
    o.note("test-particle entropies " + num(r.points.back().max_entropy_bits) + " -> " +
           num(r.points.front().max_entropy_bits) + " (" + num(drop) + "x)");
  }
  {
    const Json f = oracle::load_fixture("material_point.json");
    const IslandsConfig c = parse_islands_config(f.at("config"));
    const RegimeScanResult r = material_point_scan(c.ratios, c.fixture, 0, threads);
    bool monotone = true;
    for (std::size_t k = 1; k < r.points.size(); ++k) {
      monotone = monotone && r.points[k].max_entropy_bits > r.points[k - 1].max_entropy_bits;
    }
    o.require(monotone, "material-point entropy grows with the width ratio");
    const ScanPoint& narrow = r.points.front();
    const double dev_threshold = f.at("oracle").at("deviation_threshold").get<double>();
    o.require(narrow.min_fidelity > 0.99, "narrowest width keeps Hartree fidelity above 0.99");
    o.require(narrow.trajectory_deviation < dev_threshold, "Ehrenfest-vs-RK4 deviation below the stored threshold");
    o.note("material-point ratio " + num(narrow.parameter) + ": min fidelity " + num(narrow.min_fidelity) +
           ", deviation " + num(narrow.trajectory_deviation) + " < " + num(dev_threshold));
  }
}

void criterion_9(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / ("entlab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"bellgame", "bellgame_quantum.json"},   {"bellgame", "bellgame_mixture.json"},
      {"measure", "measure_partial.json"},     {"theorem", "theorem_random.json"},
      {"evolve", "evolve_collision.json"},     {"islands", "islands_test_particle.json"},
      {"islands", "islands_material_point.json"}};
  int compared = 0;
  for (const auto& [command, config] : runs) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (config + "." + std::to_string(rep));
      std::ostringstream out, err;
      const int code = cli::run({"entlab", command, "--config", oracle::config_path(config).string(), "--out",
                                 dir.string()},
                                out, err);
      o.require(code == 0, command + " " + config + " exits 0 (" + err.str() + ")");
      dirs.push_back(dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const fs::path other = dirs[1] / entry.path().filename();
      const bool same = fs::exists(other) && read_file(entry.path()) == read_file(other);
      o.require(same, config + "/" + entry.path().filename().string() + " byte-identical");
      ++compared;
    }
  }
  fs::remove_all(root);
  o.note(std::to_string(compared) + " output files compared across " + std::to_string(runs.size()) + " reruns");
}

}  // namespace

int main() {
  criterion(1, "Bell-game quantum value", criterion_1);
  criterion(2, "LHV bound", criterion_2);
  criterion(3, "perfect correlations", criterion_3);
  criterion(4, "entropy endpoints and complementarity", criterion_4);
  criterion(5, "Schmidt correctness", criterion_5);
  criterion(6, "factorization theorem", criterion_6);
  criterion(7, "grid solver conservation", criterion_7);
  criterion(8, "regime scans", criterion_8);
  criterion(9, "reproducibility", criterion_9);
  std::printf("%s: %d of 9 criteria failed\n", g_failures == 0 ? "PASS" : "FAIL", g_failures);
  return g_failures == 0 ? 0 : 1;
}
