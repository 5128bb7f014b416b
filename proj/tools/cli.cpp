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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>

#include <CLI11.hpp>

#include "entlab/bell_game.hpp"
#include "entlab/entanglement.hpp"
#include "entlab/finite_dynamics.hpp"
#include "entlab/grid.hpp"
#include "entlab/io.hpp"
#include "entlab/islands.hpp"

namespace entlab::cli {

namespace {

namespace fs = std::filesystem;

// A command runs in two phases. Everything thrown while loading and checking the
// config is a config error (exit 2); anything thrown afterwards is a runtime
// failure (exit 1).
struct Loaded {
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::function<void(std::ostream&, const Loaded&)> run;
};

int execute(const std::string& name, const RunOptions& opts, std::ostream& out, std::ostream& err,
            const std::function<Loaded(const Json&)>& load) {
  Loaded loaded;
  try {
    const std::string text = read_file(opts.config);
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("'" + opts.config.string() + "' is not valid JSON: " + e.what());
    }
    loaded = load(j);
    loaded.config_sha256 = sha256_hex(text);
  } catch (const InvalidArgument& e) {
    err << "entlab " << name << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "entlab " << name << ": config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    loaded.run(out, loaded);
  } catch (const std::exception& e) {
    err << "entlab " << name << ": " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

std::uint64_t pick_seed(const RunOptions& opts, const std::optional<std::uint64_t>& from_config) {
  if (opts.seed) return *opts.seed;
  return from_config.value_or(0);
}

/// Writes the manifest (incomplete), runs the writer, then marks the manifest complete.
class OutputDir {
 public:
  OutputDir(const RunOptions& opts, std::string command, const Loaded& loaded, std::vector<std::string> outputs)
      : dir_(*opts.out) {
    manifest_.command = std::move(command);
    manifest_.config_sha256 = loaded.config_sha256;
    manifest_.seed = loaded.seed;
    manifest_.outputs = std::move(outputs);
    fs::create_directories(dir_);
    manifest_.save(dir_);
  }
  fs::path operator/(const std::string& file) const { return dir_ / file; }
  void complete() {
    manifest_.complete = true;
    manifest_.save(dir_);
  }

 private:
  fs::path dir_;
  Manifest manifest_;
};

void require_out(const RunOptions& opts, const std::string& name) {
  if (!opts.out) throw ConfigError(name + " needs --out DIR");
}

Json matrix3(const std::array<std::array<std::uint64_t, 3>, 3>& m) {
  Json j = Json::array();
  for (const auto& row : m) j.push_back(Json(row));
  return j;
}

}  // namespace

int resolve_threads(std::optional<int> flag) {
  if (flag) return std::max(1, *flag);
  if (const char* env = std::getenv("CI_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_bellgame(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return execute("bellgame", opts, out, err, [&](const Json& j) {
    const BellGameConfig c = parse_bellgame_config(j);
    require_out(opts, "bellgame");
    Loaded l;
    l.seed = pick_seed(opts, c.seed);
    l.run = [&opts, c](std::ostream& o, const Loaded& l) {
      OutputDir dir(opts, "bellgame", l, {"stats.json", "frequencies.csv"});
      const GameStats stats = run_game(c.strategy, c.n_rounds, l.seed, opts.threads);
      const double sum = bell_sum(stats);
      const double reference = analytic_bell_sum(c.strategy);

      Json s{{"strategy", strategy_name(c.strategy)},
             {"n_rounds", stats.n_rounds},
             {"seed", stats.seed},
             {"rounds", matrix3(stats.rounds)},
             {"equal", matrix3(stats.equal)},
             {"bell_sum", sum},
             {"analytic_bell_sum", reference}};
      write_file(dir / "stats.json", dump_json(s));

      CsvWriter csv({"q_A", "q_B", "rounds", "equal", "frequency"});
      for (Question a : kQuestions) {
        for (Question b : kQuestions) {
          const auto ia = static_cast<std::size_t>(a);
          const auto ib = static_cast<std::size_t>(b);
          const std::uint64_t n = stats.rounds[ia][ib];
          csv.add_row(std::vector<std::string>{question_name(a), question_name(b), std::to_string(n),
                                               std::to_string(stats.equal[ia][ib]),
                                               n == 0 ? "nan" : format_real(stats.frequency(a, b))});
        }
      }
      csv.save(dir / "frequencies.csv");
      dir.complete();
      o << "strategy: " << strategy_name(c.strategy) << "\n"
        << "rounds: " << stats.n_rounds << "\n"
        << "bell_sum: " << format_real(sum) << "\n"
        << "analytic_bell_sum: " << format_real(reference) << "\n";
    };
    return l;
  });
}

int cmd_measure(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return execute("measure", opts, out, err, [&](const Json& j) {
    const MeasureConfig c = parse_measure_config(j);
    const PureState state = parse_state(c.state, opts.renormalize);
    Loaded l;
    l.seed = pick_seed(opts, std::nullopt);
    l.run = [&opts, c, state](std::ostream& o, const Loaded& l) {
      const SchmidtDecomposition sd = schmidt_decompose(state);
      const DensityMatrix rho_A = reduced_density_matrix(state, Subsystem::kA);
      const DensityMatrix rho_B = reduced_density_matrix(state, Subsystem::kB);
      const int base = std::min(state.d_A(), state.d_B());
      const double s_A = von_neumann_entropy(rho_A, base);
      const double s_B = von_neumann_entropy(rho_B, base);
      const double c_A = coherence(rho_A, base);
      const double c_B = coherence(rho_B, base);
      const double e = entanglement(state);
      const FactorizationResult f = is_factorizable(state, c.factorization_tol);

      Json r{{"d_A", state.d_A()},
             {"d_B", state.d_B()},
             {"schmidt_coefficients", sd.coefficients},
             {"schmidt_number", schmidt_number(sd)},
             {"entropy_A", s_A},
             {"entropy_B", s_B},
             {"coherence_A", c_A},
             {"coherence_B", c_B},
             {"entanglement", e},
             {"factorizable", f.factorizable}};
      if (opts.out) {
        OutputDir dir(opts, "measure", l, {"measure.json"});
        write_file(dir / "measure.json", dump_json(r));
        dir.complete();
      }
      o << "schmidt_coefficients:";
      for (double a : sd.coefficients) o << " " << format_real(a);
      o << "\n"
        << "schmidt_number: " << schmidt_number(sd) << "\n"
        << "entropy: " << format_real(s_A) << "\n"
        << "coherence_A: " << format_real(c_A) << "\n"
        << "coherence_B: " << format_real(c_B) << "\n"
        << "entanglement: " << format_real(e) << "\n"
        << "factorizable: " << (f.factorizable ? "yes" : "no") << "\n";
    };
    return l;
  });
}

int cmd_theorem(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return execute("theorem", opts, out, err, [&](const Json& j) {
    const TheoremConfig c = parse_theorem_config(j);
    require_out(opts, "theorem");
    Loaded l;
    l.seed = pick_seed(opts, c.seed);
    const BipartiteHamiltonian h = parse_hamiltonian(c.hamiltonian, l.seed);
    l.run = [&opts, c, h](std::ostream& o, const Loaded& l) {
      OutputDir dir(opts, "theorem", l, {"report.json", "witness.csv"});
      const HamiltonianSplit split = split_hamiltonian(h, c.split_tol);
      WitnessOptions wo;
      wo.n_time_samples = c.n_time_samples;
      wo.split_tol = c.split_tol;
      wo.threads = opts.threads;
      const WitnessReport rep = theorem_witness(h, c.n_product_samples, c.t_final, l.seed, wo);

      const PureState worst = witness_product_state(h.d_A(), h.d_B(), l.seed, rep.worst_sample);
      const FiniteTrajectory traj = evolve_finite(h, worst, c.t_final, c.n_time_samples);
      CsvWriter csv({"time", "entropy", "norm"});
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        csv.add_row(std::vector<double>{traj.times[k], traj.entropies[k], traj.norms[k]});
      }

      Json r{{"d_A", h.d_A()},
             {"d_B", h.d_B()},
             {"factorized", split.factorized},
             {"residual_norm", split.residual_norm},
             {"max_witness_entropy", rep.max_entanglement},
             {"worst_sample", rep.worst_sample},
             {"n_product_samples", rep.n_product_samples},
             {"t_final", c.t_final}};
      write_file(dir / "report.json", dump_json(r));
      csv.save(dir / "witness.csv");
      dir.complete();
      o << (split.factorized ? "factorized" : "coupled") << ", residual " << format_real(split.residual_norm)
        << ", max witness entropy " << format_real(rep.max_entanglement) << "\n";
    };
    return l;
  });
}

int cmd_evolve(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return execute("evolve", opts, out, err, [&](const Json& j) {
    const EvolveConfig c = parse_evolve_config(j);
    require_out(opts, "evolve");
    const Wavefunction2P psi0 = init_product(c.packet_A, c.packet_B, c.grid);
    { SplitStepPropagator check(c.grid, c.potential, c.dt); }
    Loaded l;
    l.seed = pick_seed(opts, c.seed);
    l.run = [&opts, c, psi0](std::ostream& o, const Loaded& l) {
      OutputDir dir(opts, "evolve", l, {"trajectory.csv", "summary.json"});
      SplitStepOptions so;
      so.rank_bound = c.rank_bound;
      const GridTrajectory tr = evolve_split_step(psi0, c.potential, c.dt, c.n_steps, c.sample_every, so);
      CsvWriter csv({"time", "norm", "energy", "entropy_bits", "entropy_normalized", "mean_x_A", "mean_x_B",
                     "mean_p_A", "mean_p_B"});
      for (const GridSample& s : tr.samples) {
        csv.add_row(std::vector<double>{s.time, s.norm, s.energy, s.entropy_bits, s.entropy_normalized, s.mean_x_A,
                                        s.mean_x_B, s.mean_p_A, s.mean_p_B});
      }
      csv.save(dir / "trajectory.csv");
      Json r{{"max_entropy_bits", tr.max_entropy_bits()},
             {"final_entropy_bits", tr.samples.back().entropy_bits},
             {"norm_drift", tr.norm_drift()},
             {"relative_energy_drift", tr.relative_energy_drift()},
             {"n_samples", tr.samples.size()}};
      write_file(dir / "summary.json", dump_json(r));
      dir.complete();
      o << "samples: " << tr.samples.size() << "\n"
        << "max_entropy_bits: " << format_real(tr.max_entropy_bits()) << "\n"
        << "final_entropy_bits: " << format_real(tr.samples.back().entropy_bits) << "\n"
        << "norm_drift: " << format_real(tr.norm_drift()) << "\n"
        << "relative_energy_drift: " << format_real(tr.relative_energy_drift()) << "\n";
    };
    return l;
  });
}

int cmd_islands(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return execute("islands", opts, out, err, [&](const Json& j) {
    const IslandsConfig c = parse_islands_config(j);
    require_out(opts, "islands");
    for (double r : c.ratios) {
      if (!(r > 0.0) || (c.scan == ScanKind::kMaterialPoint && !(r < 1.0))) {
        throw ConfigError("config key 'ratios': " + format_real(r) + " is out of range");
      }
    }
    init_product(c.fixture.packet_A, c.fixture.packet_B, c.fixture.grid);
    { HartreePropagator check(c.fixture.grid, c.fixture.potential, c.fixture.dt); }
    Loaded l;
    l.seed = pick_seed(opts, c.seed);
    l.run = [&opts, c](std::ostream& o, const Loaded& l) {
      std::vector<std::string> files{"scan.csv", "summary.json"};
      if (c.write_trajectories) {
        for (std::size_t k = 0; k < c.ratios.size(); ++k) files.push_back("point_" + std::to_string(k) + ".csv");
      }
      OutputDir dir(opts, "islands", l, files);
      const RegimeScanResult res = run_islands(c, l.seed, opts.threads);
      CsvWriter scan({"parameter", "max_entropy_bits", "final_fidelity", "trajectory_deviation"});
      Json points = Json::array();
      for (std::size_t k = 0; k < res.points.size(); ++k) {
        const ScanPoint& p = res.points[k];
        scan.add_row(std::vector<double>{p.parameter, p.max_entropy_bits, p.final_fidelity, p.trajectory_deviation});
        points.push_back(Json{{"parameter", p.parameter},
                              {"max_entropy_bits", p.max_entropy_bits},
                              {"final_fidelity", p.final_fidelity},
                              {"min_fidelity", p.min_fidelity},
                              {"trajectory_deviation", p.trajectory_deviation},
                              {"norm_drift", p.norm_drift},
                              {"energy_drift", p.energy_drift},
                              {"classical_energy_drift", p.classical_energy_drift}});
        if (c.write_trajectories) {
          CsvWriter t({"time", "norm", "energy", "entropy_bits", "fidelity", "mean_x_A", "mean_x_B", "classical_x_A",
                       "classical_x_B"});
          for (const IslandSample& s : p.samples) {
            t.add_row(std::vector<double>{s.time, s.norm, s.energy, s.entropy_bits, s.fidelity, s.mean_x_A,
                                          s.mean_x_B, s.classical_x_A, s.classical_x_B});
          }
          t.save(dir / ("point_" + std::to_string(k) + ".csv"));
        }
      }
      scan.save(dir / "scan.csv");
      write_file(dir / "summary.json", dump_json(Json{{"scan", res.kind}, {"seed", res.seed}, {"points", points}}));
      dir.complete();
      o << "scan: " << res.kind << "\n";
      for (const ScanPoint& p : res.points) {
        o << "  " << format_real(p.parameter) << ": max_entropy_bits " << format_real(p.max_entropy_bits)
          << ", final_fidelity " << format_real(p.final_fidelity) << ", trajectory_deviation "
          << format_real(p.trajectory_deviation) << "\n";
      }
    };
    return l;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"entlab: entanglement and classical-island experiments"};
  app.require_subcommand(1);
  RunOptions opts;
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  using Command = int (*)(const RunOptions&, std::ostream&, std::ostream&);
  const std::vector<std::pair<std::string, std::pair<std::string, Command>>> commands = {
      {"bellgame", {"Play the three-question correlation game", cmd_bellgame}},
      {"measure", {"Entanglement measures of a bipartite pure state", cmd_measure}},
      {"theorem", {"Check whether a Hamiltonian can entangle product states", cmd_theorem}},
      {"evolve", {"Two-particle split-step evolution on a grid", cmd_evolve}},
      {"islands", {"Test-particle or material-point regime scan", cmd_islands}},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, info] : commands) {
    CLI::App* sub = app.add_subcommand(name, info.first);
    sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
    sub->add_flag("--renormalize", opts.renormalize, "Normalize input amplitudes instead of rejecting them");
    sub->add_option("--threads", threads, "Worker threads (default: $CI_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", opts.verbose, "Print run details to stderr");
    subs.emplace_back(sub, info.second);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "entlab: " << e.what() << "\n";
    return kExitConfig;
  }

  opts.config = config;
  if (!out_dir.empty()) opts.out = out_dir;
  opts.seed = seed;
  opts.threads = resolve_threads(threads);
  for (const auto& [sub, fn] : subs) {
    if (sub->parsed()) {
      if (opts.verbose) {
        err << "entlab " << sub->get_name() << ": config " << opts.config.string() << ", threads " << opts.threads
            << "\n";
      }
      return fn(opts, out, err);
    }
  }
  return kExitConfig;
}

}  // namespace entlab::cli
