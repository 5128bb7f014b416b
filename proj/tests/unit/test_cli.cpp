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

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "entlab/io.hpp"
#include "oracles.hpp"

using namespace entlab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result entlab_run(std::vector<std::string> args) {
  args.insert(args.begin(), "entlab");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("entlab_test_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

fs::path write_config(const std::string& name, const Json& j) {
  const fs::path p = scratch(name);
  write_file(p, dump_json(j));
  return p;
}

// Value printed after "key: " on its own line.
double printed(const std::string& text, const std::string& key) {
  const auto at = text.find(key + ": ");
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + key.size() + 2));
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Json tiny_islands() {
  Json j = load_json_file(oracle::config_path("islands_test_particle.json"));
  j["ratios"] = {1.0, 0.1, 0.01};
  j["fixture"]["grid"]["n_A"] = 64;
  j["fixture"]["grid"]["n_B"] = 64;
  j["fixture"]["n_steps"] = 200;
  j["fixture"]["sample_every"] = 20;
  j["fixture"]["dt"] = 0.01;
  j["fixture"]["packet_A"]["momentum"] = 3.0;
  return j;
}

}  // namespace

TEST_CASE("bellgame quantum") {
  const fs::path out = scratch("bell_q");
  const fs::path config = oracle::config_path("bellgame_quantum.json");
  const Result r = entlab_run({"bellgame", "--config", config.string(), "--out", out.string(), "--threads", "2"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(printed(r.out, "bell_sum") - 0.75) < 0.02);
  CHECK(printed(r.out, "analytic_bell_sum") == 0.75);

  const Json stats = load_json_file(out / "stats.json");
  CHECK(stats.at("strategy") == "quantum");
  CHECK(stats.at("seed") == 2026);
  CHECK(stats.at("n_rounds") == 90000);
  CHECK(std::abs(stats.at("bell_sum").get<double>() - 0.75) < 0.02);

  const auto rows = read_csv(out / "frequencies.csv");
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == std::vector<std::string>{"q_A", "q_B", "rounds", "equal", "frequency"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k][0] == rows[k][1]) CHECK(rows[k][4] == "1");
  }

  const Json manifest = load_json_file(out / "manifest.json");
  CHECK(manifest.at("command") == "bellgame");
  CHECK(manifest.at("complete") == true);
  CHECK(manifest.at("seed") == 2026);
  CHECK(manifest.at("config_sha256") == sha256_hex(read_file(config)));
  CHECK(manifest.at("outputs") == Json({"stats.json", "frequencies.csv"}));
  CHECK(manifest.at("versions").contains("eigen"));
  CHECK(manifest.at("versions").contains("fftw"));
}

TEST_CASE("bellgame lhv and seed override") {
  const fs::path out = scratch("bell_lhv");
  const Result r = entlab_run({"bellgame", "--config", oracle::config_path("bellgame_lhv_all_yes.json").string(),
                               "--out", out.string(), "--seed", "5"});
  REQUIRE(r.code == 0);
  CHECK(printed(r.out, "bell_sum") == 3.0);
  CHECK(load_json_file(out / "stats.json").at("seed") == 5);
  CHECK(load_json_file(out / "manifest.json").at("seed") == 5);
}

TEST_CASE("bellgame output does not depend on thread count") {
  const fs::path a = scratch("bell_t1"), b = scratch("bell_t3");
  const std::string config = oracle::config_path("bellgame_mixture.json").string();
  REQUIRE(entlab_run({"bellgame", "--config", config, "--out", a.string(), "--threads", "1"}).code == 0);
  REQUIRE(entlab_run({"bellgame", "--config", config, "--out", b.string(), "--threads", "3"}).code == 0);
  CHECK(read_file(a / "stats.json") == read_file(b / "stats.json"));
  CHECK(read_file(a / "frequencies.csv") == read_file(b / "frequencies.csv"));
}

TEST_CASE("config errors exit 2 and name the problem") {
  Json j = load_json_file(oracle::config_path("bellgame_quantum.json"));
  j["bogus"] = 1;
  const fs::path bad = write_config("bad.json", j);
  const fs::path out = scratch("bad_out");
  Result r = entlab_run({"bellgame", "--config", bad.string(), "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "manifest.json"));

  j.erase("bogus");
  j["n_rounds"] = "many";
  r = entlab_run({"bellgame", "--config", write_config("bad2.json", j).string(), "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("n_rounds") != std::string::npos);

  const fs::path garbage = scratch("garbage.json");
  write_file(garbage, "{ not json");
  CHECK(entlab_run({"measure", "--config", garbage.string()}).code == 2);
  CHECK(entlab_run({"measure", "--config", write_config("array.json", Json::array()).string()}).code == 2);
  CHECK(entlab_run({"measure", "--config", "/nonexistent/config.json"}).code == 2);
  CHECK(entlab_run({"measure"}).code == 2);
  CHECK(entlab_run({"frobnicate", "--config", bad.string()}).code == 2);
  CHECK(entlab_run({}).code == 2);
  CHECK(entlab_run({"bellgame", "--config", oracle::config_path("bellgame_quantum.json").string(), "--threads", "0"})
            .code == 2);
  // --out is required for commands that write files.
  CHECK(entlab_run({"bellgame", "--config", oracle::config_path("bellgame_quantum.json").string()}).code == 2);
}

TEST_CASE("physically invalid configs are config errors") {
  Json e = load_json_file(oracle::config_path("evolve_collision.json"));
  e["dt"] = 1.0;
  CHECK(entlab_run({"evolve", "--config", write_config("dt.json", e).string(), "--out", scratch("dt").string()})
            .code == 2);
  e = load_json_file(oracle::config_path("evolve_collision.json"));
  e["packet_A"]["sigma"] = 10.0;
  CHECK(entlab_run({"evolve", "--config", write_config("wide.json", e).string(), "--out", scratch("w").string()})
            .code == 2);
  Json i = tiny_islands();
  i["scan"] = "material_point";
  i["ratios"] = {0.5, 1.5};
  CHECK(entlab_run({"islands", "--config", write_config("ratio.json", i).string(), "--out", scratch("r").string()})
            .code == 2);
}

TEST_CASE("runtime failures exit 1") {
  const fs::path blocker = scratch("blocker");
  write_file(blocker, "not a directory");
  const Result r = entlab_run({"bellgame", "--config", oracle::config_path("bellgame_quantum.json").string(), "--out",
                               (blocker / "sub").string()});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("measure") {
  Result r = entlab_run({"measure", "--config", oracle::config_path("measure_bell.json").string()});
  REQUIRE(r.code == 0);
  CHECK(std::abs(printed(r.out, "entanglement") - 1.0) < 1e-12);
  CHECK(r.out.find("factorizable: no") != std::string::npos);
  CHECK(r.out.find("schmidt_number: 2") != std::string::npos);

  r = entlab_run({"measure", "--config", oracle::config_path("measure_product.json").string()});
  REQUIRE(r.code == 0);
  CHECK(std::abs(printed(r.out, "entanglement")) < 1e-12);
  CHECK(r.out.find("factorizable: yes") != std::string::npos);

  const fs::path out = scratch("measure_out");
  r = entlab_run({"measure", "--config", oracle::config_path("measure_partial.json").string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(std::abs(printed(r.out, "entropy") - 0.811278) < 1e-6);
  CHECK(std::abs(printed(r.out, "entropy") - 0.8112781244591328) < 1e-12);
  CHECK(std::abs(load_json_file(out / "measure.json").at("entanglement").get<double>() - 0.8112781244591328) < 1e-12);
  CHECK(load_json_file(out / "manifest.json").at("complete") == true);
}

TEST_CASE("measure rejects unnormalized input unless asked to renormalize") {
  const fs::path config = write_config("unnorm.json", Json{{"state", {{"amplitudes", {1, 0, 0, 1}}}}});
  const Result bad = entlab_run({"measure", "--config", config.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("normalized") != std::string::npos);
  const Result ok = entlab_run({"measure", "--config", config.string(), "--renormalize"});
  REQUIRE(ok.code == 0);
  CHECK(std::abs(printed(ok.out, "entanglement") - 1.0) < 1e-12);
}

TEST_CASE("measure state syntaxes") {
  const fs::path c1 = write_config("s1.json", Json{{"state", "bell(1,1)"}});
  CHECK(std::abs(printed(entlab_run({"measure", "--config", c1.string()}).out, "entanglement") - 1.0) < 1e-12);
  const Json complex_amps = {{"amplitudes", {Json::array({0.0, std::sqrt(0.5)}), 0, 0, std::sqrt(0.5)}}};
  const fs::path c2 = write_config("s2.json", Json{{"state", complex_amps}});
  CHECK(std::abs(printed(entlab_run({"measure", "--config", c2.string()}).out, "entanglement") - 1.0) < 1e-12);
  const Json qutrit = {{"amplitudes", {1, 0, 0, 0, 1, 0, 0, 0, 1}}, {"d_A", 3}, {"d_B", 3}};
  const fs::path c3 = write_config("s3.json", Json{{"state", qutrit}});
  const Result r3 = entlab_run({"measure", "--config", c3.string(), "--renormalize"});
  REQUIRE(r3.code == 0);
  CHECK(r3.out.find("schmidt_number: 3") != std::string::npos);
  CHECK(entlab_run({"measure", "--config", write_config("s4.json", Json{{"state", "bell(2,0)"}}).string()}).code == 2);
}

TEST_CASE("theorem") {
  const fs::path out = scratch("theorem_zz");
  Result r = entlab_run({"theorem", "--config", oracle::config_path("theorem_zz.json").string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("coupled, residual 2, max witness entropy ", 0) == 0);
  const Json report = load_json_file(out / "report.json");
  CHECK(report.at("factorized") == false);
  CHECK(report.at("residual_norm").get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.at("max_witness_entropy").get<double>() >= 0.01);
  const auto rows = read_csv(out / "witness.csv");
  CHECK(rows.size() == 102);
  CHECK(rows[0] == std::vector<std::string>{"time", "entropy", "norm"});

  r = entlab_run({"theorem", "--config", oracle::config_path("theorem_local.json").string(), "--out",
                  scratch("theorem_local").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("factorized", 0) == 0);
}

TEST_CASE("evolve with no interaction stays unentangled") {
  const fs::path out = scratch("evolve_free");
  const Result r =
      entlab_run({"evolve", "--config", oracle::config_path("evolve_free.json").string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(out / "trajectory.csv");
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"time", "norm", "energy", "entropy_bits", "entropy_normalized", "mean_x_A",
                                            "mean_x_B", "mean_p_A", "mean_p_B"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(std::stod(rows[k][3]) < 1e-10);
    CHECK(std::abs(std::stod(rows[k][1]) - 1.0) < 1e-10);
  }
  const std::string text = read_file(out / "trajectory.csv");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("islands ladder and determinism") {
  Json j = tiny_islands();
  j["write_trajectories"] = true;
  const fs::path config = write_config("islands.json", j);
  const fs::path a = scratch("islands_a"), b = scratch("islands_b");
  REQUIRE(entlab_run({"islands", "--config", config.string(), "--out", a.string(), "--threads", "1"}).code == 0);
  REQUIRE(entlab_run({"islands", "--config", config.string(), "--out", b.string(), "--threads", "3"}).code == 0);
  const auto rows = read_csv(a / "scan.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"parameter", "max_entropy_bits", "final_fidelity", "trajectory_deviation"});
  // Rows ascend in the mass ratio, so the entropy column ascends too.
  for (std::size_t k = 2; k < rows.size(); ++k) {
    CHECK(std::stod(rows[k][0]) > std::stod(rows[k - 1][0]));
    CHECK(std::stod(rows[k][1]) > std::stod(rows[k - 1][1]));
  }
  for (const char* f : {"scan.csv", "summary.json", "point_0.csv", "point_2.csv", "manifest.json"}) {
    CHECK(read_file(a / f) == read_file(b / f));
  }
}

TEST_CASE("resolve_threads") {
  CHECK(cli::resolve_threads(3) == 3);
  ::setenv("CI_THREADS", "2", 1);
  CHECK(cli::resolve_threads(std::nullopt) == 2);
  CHECK(cli::resolve_threads(5) == 5);
  ::setenv("CI_THREADS", "zero", 1);
  CHECK(cli::resolve_threads(std::nullopt) >= 1);
  ::unsetenv("CI_THREADS");
  CHECK(cli::resolve_threads(std::nullopt) >= 1);
}

TEST_CASE("csv formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(std::nan("")) == "nan");
  CsvWriter w({"a", "b"});
  w.add_row(std::vector<double>{1.5, -2.0});
  CHECK(w.str() == "a,b\n1.5,-2\n");
  CHECK_THROWS(w.add_row(std::vector<double>{1.0}));
}
