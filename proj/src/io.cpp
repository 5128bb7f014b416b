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

#include "entlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include <Eigen/Core>
#include <openssl/evp.h>

#include "entlab/fft.hpp"
#include "entlab/sampling.hpp"

namespace entlab {

StrictObject::StrictObject(const Json& j, std::string context) : json_(j), context_(std::move(context)) {
  if (!j.is_object()) throw ConfigError("config '" + (context_.empty() ? "<root>" : context_) + "' must be an object");
}

const Json& StrictObject::at(const std::string& key) {
  if (!json_.contains(key)) throw ConfigError("missing config key '" + path(key) + "'");
  seen_.insert(key);
  return json_.at(key);
}

void StrictObject::finish() const {
  for (const auto& item : json_.items()) {
    if (seen_.count(item.key()) == 0) throw ConfigError("unknown config key '" + path(item.key()) + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

double parse_real(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  throw ConfigError("config key '" + where + "' must be a number");
}

cd parse_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("config key '" + where + "' must be a number or a [re, im] pair");
}

namespace {

template <typename Fn>
auto rethrow_as_config(const std::string& context, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError("invalid '" + context + "': " + e.what());
  }
}

double real_key(StrictObject& o, const std::string& key) { return parse_real(o.at(key), o.path(key)); }

double real_key(StrictObject& o, const std::string& key, double fallback) {
  return o.has(key) ? real_key(o, key) : fallback;
}

std::optional<std::uint64_t> seed_key(StrictObject& o) {
  if (!o.has("seed")) return std::nullopt;
  return o.required<std::uint64_t>("seed");
}

Json real_to_json(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

}  // namespace

GridSpec parse_grid(const Json& j, const std::string& context) {
  StrictObject o(j, context);
  GridSpec g;
  g.n_A = o.required<int>("n_A");
  g.n_B = o.required<int>("n_B");
  g.length_A = real_key(o, "length_A");
  g.length_B = real_key(o, "length_B");
  g.m_A = real_key(o, "m_A", 1.0);
  g.m_B = real_key(o, "m_B", 1.0);
  o.finish();
  rethrow_as_config(context, [&] {
    g.validate();
    return 0;
  });
  return g;
}

GaussianPacket parse_packet(const Json& j, const std::string& context) {
  StrictObject o(j, context);
  GaussianPacket p;
  p.center = real_key(o, "center");
  p.sigma = real_key(o, "sigma");
  p.momentum = real_key(o, "momentum", 0.0);
  o.finish();
  if (!(p.sigma > 0.0)) throw ConfigError("config key '" + o.path("sigma") + "' must be positive");
  return p;
}

PotentialSpec parse_potential(const Json& j, const std::string& context) {
  StrictObject o(j, context);
  PotentialSpec v;
  const std::string kind = o.required<std::string>("kind");
  v.kind = rethrow_as_config(o.path("kind"), [&] { return potential_kind_from_name(kind); });
  v.strength = real_key(o, "strength");
  v.width = real_key(o, "width");
  o.finish();
  if (!(v.width > 0.0)) throw ConfigError("config key '" + o.path("width") + "' must be positive");
  return v;
}

Json grid_to_json(const GridSpec& g) {
  return Json{{"n_A", g.n_A},
              {"n_B", g.n_B},
              {"length_A", g.length_A},
              {"length_B", g.length_B},
              {"m_A", real_to_json(g.m_A)},
              {"m_B", real_to_json(g.m_B)}};
}

Json packet_to_json(const GaussianPacket& p) {
  return Json{{"center", p.center}, {"sigma", p.sigma}, {"momentum", p.momentum}};
}

Json potential_to_json(const PotentialSpec& v) {
  return Json{{"kind", potential_kind_name(v.kind)}, {"strength", v.strength}, {"width", v.width}};
}

EvolveConfig parse_evolve_config(const Json& j) {
  StrictObject o(j, "");
  EvolveConfig c;
  c.grid = parse_grid(o.at("grid"), "grid");
  c.packet_A = parse_packet(o.at("packet_A"), "packet_A");
  c.packet_B = parse_packet(o.at("packet_B"), "packet_B");
  if (o.has("potential")) c.potential = parse_potential(o.at("potential"), "potential");
  c.dt = real_key(o, "dt");
  c.n_steps = o.required<int>("n_steps");
  c.sample_every = o.optional<int>("sample_every", c.n_steps);
  c.rank_bound = o.optional<int>("rank_bound", kDefaultRankBound);
  c.seed = seed_key(o);
  o.finish();
  if (c.n_steps < 1) throw ConfigError("config key 'n_steps' must be positive");
  if (c.sample_every < 1) throw ConfigError("config key 'sample_every' must be positive");
  if (c.rank_bound < 2) throw ConfigError("config key 'rank_bound' must be at least 2");
  return c;
}

Json evolve_config_to_json(const EvolveConfig& c) {
  Json j{{"grid", grid_to_json(c.grid)},
         {"packet_A", packet_to_json(c.packet_A)},
         {"packet_B", packet_to_json(c.packet_B)},
         {"potential", potential_to_json(c.potential)},
         {"dt", c.dt},
         {"n_steps", c.n_steps},
         {"sample_every", c.sample_every},
         {"rank_bound", c.rank_bound}};
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

IslandFixture parse_island_fixture(const Json& j, const std::string& context) {
  StrictObject o(j, context);
  IslandFixture f;
  f.grid = parse_grid(o.at("grid"), o.path("grid"));
  f.packet_A = parse_packet(o.at("packet_A"), o.path("packet_A"));
  f.packet_B = parse_packet(o.at("packet_B"), o.path("packet_B"));
  f.potential = parse_potential(o.at("potential"), o.path("potential"));
  f.dt = real_key(o, "dt");
  f.n_steps = o.required<int>("n_steps");
  f.sample_every = o.optional<int>("sample_every", f.sample_every);
  f.rank_bound = o.optional<int>("rank_bound", f.rank_bound);
  f.rk4_substeps = o.optional<int>("rk4_substeps", f.rk4_substeps);
  o.finish();
  if (f.n_steps < 1) throw ConfigError("config key '" + o.path("n_steps") + "' must be positive");
  if (f.sample_every < 1) throw ConfigError("config key '" + o.path("sample_every") + "' must be positive");
  if (f.rk4_substeps < 1) throw ConfigError("config key '" + o.path("rk4_substeps") + "' must be positive");
  return f;
}

Json island_fixture_to_json(const IslandFixture& f) {
  return Json{{"grid", grid_to_json(f.grid)},
              {"packet_A", packet_to_json(f.packet_A)},
              {"packet_B", packet_to_json(f.packet_B)},
              {"potential", potential_to_json(f.potential)},
              {"dt", f.dt},
              {"n_steps", f.n_steps},
              {"sample_every", f.sample_every},
              {"rank_bound", f.rank_bound},
              {"rk4_substeps", f.rk4_substeps}};
}

IslandsConfig parse_islands_config(const Json& j) {
  StrictObject o(j, "");
  IslandsConfig c;
  const std::string scan = o.required<std::string>("scan");
  if (scan == "test_particle") {
    c.scan = ScanKind::kTestParticle;
  } else if (scan == "material_point") {
    c.scan = ScanKind::kMaterialPoint;
  } else {
    throw ConfigError("config key 'scan' must be \"test_particle\" or \"material_point\" (got \"" + scan + "\")");
  }
  c.ratios = o.required<std::vector<double>>("ratios");
  if (c.ratios.empty()) throw ConfigError("config key 'ratios' must not be empty");
  c.fixture = parse_island_fixture(o.at("fixture"), "fixture");
  c.write_trajectories = o.optional<bool>("write_trajectories", false);
  c.seed = seed_key(o);
  o.finish();
  return c;
}

RegimeScanResult run_islands(const IslandsConfig& c, std::uint64_t seed, int threads) {
  return c.scan == ScanKind::kTestParticle ? test_particle_scan(c.ratios, c.fixture, seed, threads)
                                           : material_point_scan(c.ratios, c.fixture, seed, threads);
}

BellGameConfig parse_bellgame_config(const Json& j) {
  StrictObject o(j, "");
  BellGameConfig c;
  const std::string kind = o.required<std::string>("strategy");
  if (kind == "quantum") {
    c.strategy = QuantumStrategy{};
  } else if (kind == "lhv") {
    const std::string answers = o.required<std::string>("answers");
    static const std::regex pattern("[yn]{3}");
    if (!std::regex_match(answers, pattern)) {
      throw ConfigError("config key 'answers' must be three of 'y'/'n' for alpha, beta, gamma (got \"" + answers +
                        "\")");
    }
    LhvStrategy s;
    for (std::size_t k = 0; k < 3; ++k) s.yes[k] = answers[k] == 'y';
    c.strategy = s;
  } else if (kind == "mixture") {
    const auto w = o.required<std::vector<double>>("weights");
    if (w.size() != 8) throw ConfigError("config key 'weights' must list 8 weights");
    MixedLhvStrategy s;
    double total = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
      if (!(w[k] >= 0.0)) throw ConfigError("config key 'weights' must be non-negative");
      s.weights[k] = w[k];
      total += w[k];
    }
    if (!(std::abs(total - 1.0) <= 1e-12)) throw ConfigError("config key 'weights' must sum to 1");
    c.strategy = s;
  } else {
    throw ConfigError("config key 'strategy' must be \"quantum\", \"lhv\" or \"mixture\" (got \"" + kind + "\")");
  }
  c.n_rounds = o.required<std::uint64_t>("n_rounds");
  if (c.n_rounds == 0) throw ConfigError("config key 'n_rounds' must be positive");
  c.seed = seed_key(o);
  o.finish();
  return c;
}

MeasureConfig parse_measure_config(const Json& j) {
  StrictObject o(j, "");
  MeasureConfig c;
  c.state = o.at("state");
  c.factorization_tol = real_key(o, "factorization_tol", c.factorization_tol);
  o.finish();
  return c;
}

namespace {

std::vector<double> parse_call(const std::string& text, const std::string& name, std::size_t arity) {
  static const std::regex call(R"(\s*([a-z]+)\s*\(([^)]*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, call) || m[1] != name) {
    throw ConfigError("config key 'state': cannot parse \"" + text + "\"");
  }
  std::vector<double> args;
  std::stringstream ss(m[2].str());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("config key 'state': bad argument \"" + item + "\" in \"" + text + "\"");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("config key 'state': bad argument \"" + item + "\" in \"" + text + "\"");
    }
    args.push_back(v);
  }
  if (args.size() != arity) {
    throw ConfigError("config key 'state': " + name + "() takes " + std::to_string(arity) + " arguments");
  }
  return args;
}

CVector parse_amplitude_list(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError("config key '" + where + "' must be a non-empty list");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = parse_complex(j[k], where + "[" + std::to_string(k) + "]");
  }
  return v;
}

Ket make_ket(CVector v, bool renormalize) {
  return renormalize ? Ket::normalized(std::move(v)) : Ket::from_amplitudes(std::move(v));
}

}  // namespace

PureState parse_state(const Json& j, bool renormalize) {
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (text.find("bell") != std::string::npos) {
      const auto a = parse_call(text, "bell", 2);
      if (a[0] != std::floor(a[0]) || a[1] != std::floor(a[1]) || a[0] < 0 || a[0] > 1 || a[1] < 0 || a[1] > 1) {
        throw ConfigError("config key 'state': bell(i,j) needs i, j in {0, 1}");
      }
      return bell_state(static_cast<int>(a[0]), static_cast<int>(a[1]));
    }
    const auto a = parse_call(text, "product", 4);
    return tensor_product(spin_eigenstate(MeasurementDirection(a[0], a[1]), SpinSign::kUp),
                          spin_eigenstate(MeasurementDirection(a[2], a[3]), SpinSign::kUp));
  }
  StrictObject o(j, "state");
  if (o.has("product")) {
    StrictObject p(o.at("product"), "state.product");
    CVector a = parse_amplitude_list(p.at("a"), "state.product.a");
    CVector b = parse_amplitude_list(p.at("b"), "state.product.b");
    p.finish();
    o.finish();
    if (a.size() < 2 || b.size() < 2) throw ConfigError("config key 'state.product': factors need at least 2 amplitudes");
    return tensor_product(make_ket(std::move(a), renormalize), make_ket(std::move(b), renormalize));
  }
  const CVector flat = parse_amplitude_list(o.at("amplitudes"), "state.amplitudes");
  int d_A = 2;
  int d_B = static_cast<int>(flat.size()) / 2;
  if (o.has("d_A") || o.has("d_B")) {
    d_A = o.required<int>("d_A");
    d_B = o.required<int>("d_B");
  } else if (flat.size() != 4) {
    throw ConfigError("config key 'state': d_A and d_B are required unless there are exactly 4 amplitudes");
  }
  o.finish();
  if (d_A < 2 || d_B < 2 || static_cast<Eigen::Index>(d_A) * d_B != flat.size()) {
    throw ConfigError("config key 'state': " + std::to_string(flat.size()) + " amplitudes do not fit d_A = " +
                      std::to_string(d_A) + ", d_B = " + std::to_string(d_B));
  }
  if (renormalize) {
    if (!(flat.norm() > 0.0)) throw ConfigError("config key 'state': the zero vector cannot be renormalized");
    return PureState::from_vector(flat / flat.norm(), d_A, d_B, 1e-12);
  }
  return PureState::from_vector(flat, d_A, d_B);
}

TheoremConfig parse_theorem_config(const Json& j) {
  StrictObject o(j, "");
  TheoremConfig c;
  c.hamiltonian = o.at("hamiltonian");
  c.n_product_samples = o.optional<int>("n_product_samples", c.n_product_samples);
  c.t_final = real_key(o, "t_final", c.t_final);
  c.n_time_samples = o.optional<int>("n_time_samples", c.n_time_samples);
  c.split_tol = real_key(o, "split_tol", c.split_tol);
  c.seed = seed_key(o);
  o.finish();
  if (c.n_product_samples < 1) throw ConfigError("config key 'n_product_samples' must be positive");
  if (c.n_time_samples < 2) throw ConfigError("config key 'n_time_samples' must be at least 2");
  if (!(c.t_final > 0.0)) throw ConfigError("config key 't_final' must be positive");
  return c;
}

BipartiteHamiltonian parse_hamiltonian(const Json& j, std::uint64_t seed) {
  StrictObject o(j, "hamiltonian");
  if (o.has("pauli_terms")) {
    const Json& terms = o.at("pauli_terms");
    o.finish();
    if (!terms.is_array()) throw ConfigError("config key 'hamiltonian.pauli_terms' must be a list");
    std::vector<std::tuple<double, char, char>> parsed;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string where = "hamiltonian.pauli_terms[" + std::to_string(k) + "]";
      const Json& t = terms[k];
      if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_string() || !t[2].is_string()) {
        throw ConfigError("config key '" + where + "' must be [coefficient, \"a\", \"b\"]");
      }
      const auto a = t[1].get<std::string>();
      const auto b = t[2].get<std::string>();
      static const std::regex pauli("[ixyzIXYZ]");
      if (!std::regex_match(a, pauli) || !std::regex_match(b, pauli)) {
        throw ConfigError("config key '" + where + "': Pauli labels are i, x, y, z");
      }
      parsed.emplace_back(t[0].get<double>(), a[0], b[0]);
    }
    return BipartiteHamiltonian::pauli_sum(parsed);
  }
  if (o.has("matrix")) {
    const Json& rows = o.at("matrix");
    const int d_A = o.required<int>("d_A");
    const int d_B = o.required<int>("d_B");
    o.finish();
    if (!rows.is_array()) throw ConfigError("config key 'hamiltonian.matrix' must be a list of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ConfigError("config key 'hamiltonian.matrix' must be square");
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        m(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                                "hamiltonian.matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    return rethrow_as_config("hamiltonian.matrix", [&] { return BipartiteHamiltonian::from_matrix(m, d_A, d_B); });
  }
  StrictObject r(o.at("random"), "hamiltonian.random");
  o.finish();
  const int d_A = r.required<int>("d_A");
  const int d_B = r.required<int>("d_B");
  const bool factorized = r.optional<bool>("factorized", false);
  r.finish();
  if (d_A < 2 || d_B < 2) throw ConfigError("config key 'hamiltonian.random': dimensions must be at least 2");
  SplitMix64 rng(mix64(seed ^ 0x48616d696c746f6eULL));
  if (factorized) {
    const CMatrix h_A = random_hermitian(d_A, rng);
    const CMatrix h_B = random_hermitian(d_B, rng);
    return BipartiteHamiltonian::factorized(h_A, h_B);
  }
  return BipartiteHamiltonian::from_matrix(random_hermitian(d_A * d_B, rng), d_A, d_B);
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { add_row(header); }

void CsvWriter::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_real(v));
  add_row(cells);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("CSV row has the wrong number of cells");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) text_ += ',';
    text_ += cells[k];
  }
  text_ += '\n';
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xf];
  }
  return out;
}

Json version_info() {
  return Json{{"entlab", ENTLAB_VERSION},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"fftw", fftw_version_string()},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

Json Manifest::to_json() const {
  return Json{{"command", command},   {"config_sha256", config_sha256}, {"seed", seed},
              {"outputs", outputs},   {"versions", version_info()},     {"complete", complete}};
}

void Manifest::save(const std::filesystem::path& dir) const { write_file(dir / "manifest.json", dump_json(to_json())); }

}  // namespace entlab
