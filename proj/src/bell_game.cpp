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

#include "entlab/bell_game.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace entlab {

namespace {

constexpr std::array<std::pair<Question, Question>, 3> kCyclicPairs = {{
    {Question::kAlpha, Question::kBeta},
    {Question::kBeta, Question::kGamma},
    {Question::kGamma, Question::kAlpha},
}};

std::size_t idx(Question q) { return static_cast<std::size_t>(q); }

// Born-rule distributions for all nine question pairs, computed once.
const std::array<std::array<JointProbabilities, 3>, 3>& quantum_table() {
  static const auto table = [] {
    std::array<std::array<JointProbabilities, 3>, 3> t{};
    const PureState bell = bell_state(0, 0);
    for (Question a : kQuestions)
      for (Question b : kQuestions)
        t[idx(a)][idx(b)] = joint_spin_probabilities(bell, question_direction(a), question_direction(b));
    return t;
  }();
  return table;
}

GameStats run_range(const Strategy& strategy, std::uint64_t begin, std::uint64_t end, std::uint64_t seed) {
  GameStats s;
  s.seed = seed;
  for (std::uint64_t r = begin; r < end; ++r) {
    SplitMix64 rng = SplitMix64::stream(seed, r);
    const Question q_A = question_from_index(static_cast<int>(rng.below(3)));
    const Question q_B = question_from_index(static_cast<int>(rng.below(3)));
    const Answers a = play_round(strategy, rng, q_A, q_B);
    ++s.rounds[idx(q_A)][idx(q_B)];
    if (a.equal()) ++s.equal[idx(q_A)][idx(q_B)];
  }
  s.n_rounds = end - begin;
  return s;
}

}  // namespace

const char* question_name(Question q) {
  switch (q) {
    case Question::kAlpha:
      return "alpha";
    case Question::kBeta:
      return "beta";
    case Question::kGamma:
      return "gamma";
  }
  return "?";
}

Question question_from_index(int index) {
  if (index < 0 || index > 2) throw InvalidArgument("question index out of range");
  return static_cast<Question>(index);
}

MeasurementDirection question_direction(Question q) {
  switch (q) {
    case Question::kAlpha:
      return MeasurementDirection(0.0, 0.0);
    case Question::kBeta:
      return MeasurementDirection(2.0 * kPi / 3.0, 0.0);
    case Question::kGamma:
      return MeasurementDirection(4.0 * kPi / 3.0, 0.0);
  }
  throw InvalidArgument("unknown question");
}

LhvStrategy LhvStrategy::from_index(int index) {
  if (index < 0 || index > 7) throw InvalidArgument("LHV strategy index must be in [0, 8)");
  LhvStrategy s;
  for (std::size_t k = 0; k < 3; ++k) s.yes[k] = ((index >> k) & 1) != 0;
  return s;
}

int LhvStrategy::index() const {
  int i = 0;
  for (std::size_t k = 0; k < 3; ++k)
    if (yes[k]) i |= 1 << k;
  return i;
}

std::string strategy_name(const Strategy& s) {
  if (std::holds_alternative<QuantumStrategy>(s)) return "quantum";
  if (std::holds_alternative<LhvStrategy>(s)) return "lhv";
  return "lhv_mixture";
}

GameStats& GameStats::operator+=(const GameStats& other) {
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      rounds[a][b] += other.rounds[a][b];
      equal[a][b] += other.equal[a][b];
    }
  }
  n_rounds += other.n_rounds;
  return *this;
}

double GameStats::frequency(Question q_A, Question q_B) const {
  const std::uint64_t n = rounds[idx(q_A)][idx(q_B)];
  if (n == 0) {
    throw MissingPairError(std::string("no rounds played for question pair (") + question_name(q_A) + ", " +
                           question_name(q_B) + ")");
  }
  return static_cast<double>(equal[idx(q_A)][idx(q_B)]) / static_cast<double>(n);
}

Answers quantum_round(SplitMix64& rng, Question q_A, Question q_B) {
  const JointProbabilities& p = quantum_table()[idx(q_A)][idx(q_B)];
  // Sample against the cumulative distribution scaled by its sum.
  const double u = rng.uniform() * p.sum();
  if (u < p.uu) return {true, true};
  if (u < p.uu + p.ud) return {true, false};
  if (u < p.uu + p.ud + p.du) return {false, true};
  return {false, false};
}

Answers play_round(const Strategy& strategy, SplitMix64& rng, Question q_A, Question q_B) {
  if (std::holds_alternative<QuantumStrategy>(strategy)) return quantum_round(rng, q_A, q_B);
  if (const auto* lhv = std::get_if<LhvStrategy>(&strategy)) return {lhv->answer(q_A), lhv->answer(q_B)};

  const auto& mixed = std::get<MixedLhvStrategy>(strategy);
  double total = 0.0;
  for (double w : mixed.weights) total += w;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  int chosen = 7;
  for (int k = 0; k < 8; ++k) {
    acc += mixed.weights[static_cast<std::size_t>(k)];
    if (u < acc) {
      chosen = k;
      break;
    }
  }
  const LhvStrategy list = LhvStrategy::from_index(chosen);
  return {list.answer(q_A), list.answer(q_B)};
}

double quantum_equal_probability(Question q_A, Question q_B) {
  const int k = std::abs(static_cast<int>(q_A) - static_cast<int>(q_B));
  // cos^2(0) and cos^2(pi/3) = cos^2(2pi/3).
  return k == 0 ? 1.0 : 0.25;
}

double bell_sum(const GameStats& stats) {
  double s = 0.0;
  for (const auto& [a, b] : kCyclicPairs) s += stats.frequency(a, b);
  return s;
}

double analytic_bell_sum(const Strategy& strategy) {
  if (std::holds_alternative<QuantumStrategy>(strategy)) {
    double s = 0.0;
    for (const auto& [a, b] : kCyclicPairs) s += quantum_equal_probability(a, b);
    return s;
  }
  auto deterministic = [](const LhvStrategy& l) {
    double s = 0.0;
    for (const auto& [a, b] : kCyclicPairs) s += l.answer(a) == l.answer(b) ? 1.0 : 0.0;
    return s;
  };
  if (const auto* lhv = std::get_if<LhvStrategy>(&strategy)) return deterministic(*lhv);

  const auto& mixed = std::get<MixedLhvStrategy>(strategy);
  double total = 0.0;
  double s = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double w = mixed.weights[static_cast<std::size_t>(k)];
    if (w < 0.0) throw InvalidArgument("mixture weights must be nonnegative");
    total += w;
    s += w * deterministic(LhvStrategy::from_index(k));
  }
  if (!(total > 0.0)) throw InvalidArgument("mixture weights sum to zero");
  return s / total;
}

GameStats run_game(const Strategy& strategy, std::uint64_t n_rounds, std::uint64_t seed, int threads) {
  if (n_rounds == 0) throw InvalidArgument("run_game: n_rounds must be positive");
  if (const auto* mixed = std::get_if<MixedLhvStrategy>(&strategy)) {
    double total = 0.0;
    for (double w : mixed->weights) {
      if (w < 0.0 || !std::isfinite(w)) throw InvalidArgument("mixture weights must be finite and nonnegative");
      total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("mixture weights sum to zero");
  }
  const std::uint64_t shards =
      std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(threads, 1)), 1, n_rounds);
  if (shards == 1) return run_range(strategy, 0, n_rounds, seed);

  std::vector<GameStats> partial(shards);
  {
    std::vector<std::jthread> workers;
    workers.reserve(shards);
    for (std::uint64_t k = 0; k < shards; ++k) {
      const std::uint64_t begin = n_rounds * k / shards;
      const std::uint64_t end = n_rounds * (k + 1) / shards;
      workers.emplace_back([&, k, begin, end] { partial[k] = run_range(strategy, begin, end, seed); });
    }
  }
  GameStats total;
  total.seed = seed;
  for (const GameStats& p : partial) total += p;
  return total;
}

}  // namespace entlab
