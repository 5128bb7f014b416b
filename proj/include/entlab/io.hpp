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

// Strict JSON configs, CSV output and run manifests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "entlab/bell_game.hpp"
#include "entlab/finite_dynamics.hpp"
#include "entlab/grid.hpp"
#include "entlab/islands.hpp"

namespace entlab {

using Json = nlohmann::json;

/// Malformed or unknown configuration content. Messages name the offending key.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Reads keys from a JSON object and rejects any key that was never read.
///
///   StrictObject o(j, "grid");
///   int n = o.required<int>("n_A");
///   o.finish();  // throws ConfigError naming the first unread key
class StrictObject {
 public:
  StrictObject(const Json& j, std::string context);

  bool has(const std::string& key) const { return json_.contains(key); }
  const Json& at(const std::string& key);
  template <typename T>
  T required(const std::string& key);
  template <typename T>
  T optional(const std::string& key, T fallback);
  void finish() const;
  const std::string& context() const { return context_; }
  std::string path(const std::string& key) const { return context_.empty() ? key : context_ + "." + key; }

 private:
  const Json& json_;
  std::string context_;
  std::set<std::string> seen_;
};

template <typename T>
T StrictObject::required(const std::string& key) {
  const Json& v = at(key);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + path(key) + "' has the wrong type");
  }
}

template <typename T>
T StrictObject::optional(const std::string& key, T fallback) {
  if (!has(key)) return fallback;
  return required<T>(key);
}

Json load_json_file(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);
/// Writes bytes verbatim (no newline translation).
void write_file(const std::filesystem::path& path, const std::string& content);

/// Real number, or the strings "inf" / "infinity" for +infinity.
double parse_real(const Json& j, const std::string& where);
/// Number or [re, im] pair.
cd parse_complex(const Json& j, const std::string& where);

GridSpec parse_grid(const Json& j, const std::string& context = "grid");
GaussianPacket parse_packet(const Json& j, const std::string& context);
PotentialSpec parse_potential(const Json& j, const std::string& context = "potential");

Json grid_to_json(const GridSpec& g);
Json packet_to_json(const GaussianPacket& p);
Json potential_to_json(const PotentialSpec& v);

struct EvolveConfig {
  GridSpec grid;
  GaussianPacket packet_A;
  GaussianPacket packet_B;
  PotentialSpec potential;
  double dt = 0.005;
  int n_steps = 1000;
  int sample_every = 100;
  int rank_bound = kDefaultRankBound;
  std::optional<std::uint64_t> seed;
};

EvolveConfig parse_evolve_config(const Json& j);
Json evolve_config_to_json(const EvolveConfig& c);

enum class ScanKind { kTestParticle, kMaterialPoint };

struct IslandsConfig {
  ScanKind scan = ScanKind::kTestParticle;
  std::vector<double> ratios;
  IslandFixture fixture;
  bool write_trajectories = false;
  std::optional<std::uint64_t> seed;
};

IslandFixture parse_island_fixture(const Json& j, const std::string& context = "fixture");
Json island_fixture_to_json(const IslandFixture& f);
IslandsConfig parse_islands_config(const Json& j);
RegimeScanResult run_islands(const IslandsConfig& c, std::uint64_t seed, int threads);

struct BellGameConfig {
  Strategy strategy;
  std::uint64_t n_rounds = 0;
  std::optional<std::uint64_t> seed;
};

BellGameConfig parse_bellgame_config(const Json& j);

struct MeasureConfig {
  Json state;
  double factorization_tol = 1e-10;
};

MeasureConfig parse_measure_config(const Json& j);
/// "bell(i,j)", "product(theta_A,phi_A,theta_B,phi_B)", {"amplitudes": [...], "d_A", "d_B"}
/// or {"product": {"a": [...], "b": [...]}}. Throws ConfigError for malformed input and
/// NotAState for unnormalized amplitudes unless renormalize is set.
PureState parse_state(const Json& j, bool renormalize);

struct TheoremConfig {
  Json hamiltonian;
  int n_product_samples = 50;
  double t_final = 10.0;
  int n_time_samples = 101;
  double split_tol = 1e-9;
  std::optional<std::uint64_t> seed;
};

TheoremConfig parse_theorem_config(const Json& j);
/// {"pauli_terms": [[c, "z", "z"], ...]}, {"matrix": [[...]], "d_A", "d_B"} or
/// {"random": {"d_A", "d_B", "factorized"}} (drawn from seed).
BipartiteHamiltonian parse_hamiltonian(const Json& j, std::uint64_t seed);

/// printf("%.17g"); non-finite values print as nan / inf / -inf.
std::string format_real(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }
  void save(const std::filesystem::path& path) const { write_file(path, text_); }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Serialized JSON with 2-space indent and a trailing newline.
std::string dump_json(const Json& j);

std::string sha256_hex(const std::string& bytes);

struct Manifest {
  std::string command;
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  bool complete = false;

  Json to_json() const;
  void save(const std::filesystem::path& dir) const;
};

/// Library versions recorded in manifests.
Json version_info();

}  // namespace entlab
