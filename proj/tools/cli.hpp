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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace entlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  bool renormalize = false;
  int threads = 1;
  bool verbose = false;
};

int cmd_bellgame(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_measure(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_theorem(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_evolve(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_islands(const RunOptions& opts, std::ostream& out, std::ostream& err);

/// --threads if given, else $CI_THREADS, else the hardware thread count.
int resolve_threads(std::optional<int> flag);

/// Parses argv and dispatches. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entlab::cli
