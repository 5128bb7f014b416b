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

// The three-question Alice/Bob game.
//
// Each round two referees independently pick one of three questions
// (alpha, beta, gamma) for Alice and for Bob, who must answer yes/no without
// communicating. Players sharing a pre-written answer list obey
//
//   P(alpha_A = beta_B) + P(beta_A = gamma_B) + P(gamma_A = alpha_B) >= 1
//
// because three questions with two possible answers always have a repeated
// answer. Players sharing |B^0_0> and measuring spin along theta = 0, 2pi/3,
// 4pi/3 reach 3/4.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "entlab/qubit.hpp"
#include "entlab/rng.hpp"

namespace entlab {

enum class Question : int { kAlpha = 0, kBeta = 1, kGamma = 2 };

inline constexpr std::array<Question, 3> kQuestions = {Question::kAlpha, Question::kBeta, Question::kGamma};

const char* question_name(Question q);
Question question_from_index(int index);

/// theta = 0, 2pi/3, 4pi/3 with phi = 0.
MeasurementDirection question_direction(Question q);

/// Answers are yes (spin up) or no (spin down).
struct Answers {
  bool alice_yes = false;
  bool bob_yes = false;

  bool equal() const { return alice_yes == bob_yes; }
};

struct QuantumStrategy {};

/// Deterministic shared answer list.
struct LhvStrategy {
  std::array<bool, 3> yes{};

  /// Bit k of index (k = question index) set means "yes". index in [0, 8).
  static LhvStrategy from_index(int index);
  int index() const;
  bool answer(Question q) const { return yes[static_cast<std::size_t>(q)]; }
};

/// Probability weights over the 8 deterministic lists (LhvStrategy::from_index).
struct MixedLhvStrategy {
  std::array<double, 8> weights{};
};

using Strategy = std::variant<QuantumStrategy, LhvStrategy, MixedLhvStrategy>;

std::string strategy_name(const Strategy& s);

class MissingPairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GameStats {
  std::uint64_t seed = 0;
  std::uint64_t n_rounds = 0;
  /// Indexed [q_A][q_B].
  std::array<std::array<std::uint64_t, 3>, 3> rounds{};
  std::array<std::array<std::uint64_t, 3>, 3> equal{};

  GameStats& operator+=(const GameStats& other);
  bool operator==(const GameStats& other) const = default;
  /// Conditional equal-answer frequency; throws MissingPairError if no rounds.
  double frequency(Question q_A, Question q_B) const;
};

/// Sample one round of the quantum strategy from the Born-rule distribution.
Answers quantum_round(SplitMix64& rng, Question q_A, Question q_B);

/// One round of any strategy for fixed questions.
Answers play_round(const Strategy& strategy, SplitMix64& rng, Question q_A, Question q_B);

/// Exact P(answers equal | q_A, q_B) for the quantum strategy: cos^2(pi k / 3),
/// k = |index(q_A) - index(q_B)|, i.e. 1 or 1/4.
double quantum_equal_probability(Question q_A, Question q_B);

/// Sum of conditional equal-answer frequencies over (alpha,beta), (beta,gamma), (gamma,alpha).
double bell_sum(const GameStats& stats);

/// Closed form of the same sum; quantum gives 3/4, deterministic lists give 1 or 3.
double analytic_bell_sum(const Strategy& strategy);

/// Plays n_rounds rounds. Round r draws its questions and outcome from
/// SplitMix64::stream(seed, r), so the result does not depend on threads.
GameStats run_game(const Strategy& strategy, std::uint64_t n_rounds, std::uint64_t seed, int threads = 1);

}  // namespace entlab
