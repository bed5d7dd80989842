// Copyright 2026 The kk-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded rejection-sampling generator for uniquely solvable puzzles.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kkforge/logic.hpp"
#include "kkforge/rng.hpp"
#include "kkforge/solver.hpp"

namespace kkforge {

inline constexpr std::size_t kMinGeneratedCharacters = 3;
inline constexpr std::size_t kMaxGeneratedCharacters = 7;

/// Default roster pool. Order matters: it is part of the pinned generation
/// procedure.
inline const std::vector<std::string>& default_name_pool() {
  static const std::vector<std::string> pool = {
      "Luke",   "Liam",     "Matthew",  "Ella",    "Olivia", "Noah",   "Emma",   "James",
      "Sophia", "William",  "Ava",      "Benjamin", "Isabella", "Lucas", "Mia",   "Henry",
      "Amelia", "Alexander", "Harper",  "Michael", "Evelyn", "Daniel", "Abigail", "Jacob",
      "Emily",  "Logan",    "Charlotte", "Jackson", "Scarlett", "Aiden", "Grace", "Samuel",
      "Chloe",  "David",    "Victoria", "Joseph",  "Riley",  "Owen",   "Aria",   "Wyatt",
      "Lily",   "Jack",     "Zoe",      "Oliver",  "Hannah", "Ethan",  "Nora",   "Gabriel",
  };
  return pool;
}

/// Relative weights of node kinds when a node above depth 0 is drawn.
struct NodeWeights {
  std::uint32_t atom = 30;
  std::uint32_t negation = 10;
  std::uint32_t conj = 15;
  std::uint32_t disj = 15;
  std::uint32_t implies = 15;
  std::uint32_t iff = 15;

  std::array<std::uint32_t, 6> as_array() const { return {atom, negation, conj, disj, implies, iff}; }
};

struct GenConfig {
  std::size_t num_characters = 4;
  int max_depth = 2;
  std::size_t max_attempts = 10'000;
  std::vector<std::string> name_pool = default_name_pool();
  NodeWeights weights{};

  void validate() const {
    if (num_characters < kMinGeneratedCharacters || num_characters > kMaxGeneratedCharacters) {
      throw std::invalid_argument("GenConfig: num_characters must be in [3, 7], got " +
                                  std::to_string(num_characters));
    }
    if (name_pool.size() < kMaxGeneratedCharacters) {
      throw std::invalid_argument("GenConfig: name_pool needs at least 7 names");
    }
    for (std::size_t i = 0; i < name_pool.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (name_pool[i] == name_pool[j]) throw std::invalid_argument("GenConfig: duplicate name '" + name_pool[i] + "'");
      }
    }
    if (max_depth < 1) throw std::invalid_argument("GenConfig: max_depth must be >= 1");
    if (max_attempts < 1) throw std::invalid_argument("GenConfig: max_attempts must be >= 1");
    const auto w = weights.as_array();
    std::uint64_t total = 0;
    for (auto x : w) total += x;
    if (total == 0) throw std::invalid_argument("GenConfig: node weights sum to zero");
  }
};

class GenerationExhausted : public std::runtime_error {
 public:
  GenerationExhausted(std::size_t num_characters, std::size_t attempts)
      : std::runtime_error("no uniquely solvable " + std::to_string(num_characters) + "-character puzzle after " +
                           std::to_string(attempts) + " attempts") {}
};

/// Random statement over a roster of `roster_size`. Depth 0 always yields an
/// atom; above that the node kind is drawn from `weights` and operands are
/// sampled at depth - 1.
inline Statement sample_statement(Rng& rng, std::size_t roster_size, int depth, const NodeWeights& weights = {}) {
  if (roster_size == 0) throw std::invalid_argument("sample_statement: empty roster");
  auto atom = [&] {
    const auto who = static_cast<std::size_t>(rng.below(roster_size));
    const auto role = rng.below(2) == 1 ? Role::Knight : Role::Knave;
    return Statement::atom({who}, role);
  };
  if (depth <= 0) return atom();

  static constexpr Statement::Kind kBinary[] = {Statement::Kind::And, Statement::Kind::Or,
                                                Statement::Kind::Implies, Statement::Kind::Iff};
  const auto w = weights.as_array();
  const std::size_t choice = rng.weighted(w);
  if (choice == 0) return atom();
  if (choice == 1) return Statement::negation(sample_statement(rng, roster_size, depth - 1, weights));
  // Left operand is drawn before the right one.
  auto lhs = sample_statement(rng, roster_size, depth - 1, weights);
  auto rhs = sample_statement(rng, roster_size, depth - 1, weights);
  return Statement::binary(kBinary[choice - 2], std::move(lhs), std::move(rhs));
}

struct GenerationStats {
  std::size_t attempts = 0;
  std::size_t rejections() const { return attempts == 0 ? 0 : attempts - 1; }
};

/// Draws a roster without replacement, then resamples statements until the
/// puzzle has exactly one consistent assignment.
inline Puzzle generate_puzzle(const GenConfig& config, Rng& rng, GenerationStats* stats = nullptr) {
  config.validate();
  const std::size_t n = config.num_characters;

  std::vector<std::string> pool = config.name_pool;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  Puzzle puzzle;
  puzzle.names.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));

  for (std::size_t attempt = 1; attempt <= config.max_attempts; ++attempt) {
    puzzle.statements.clear();
    for (std::size_t i = 0; i < n; ++i) {
      puzzle.statements.push_back(sample_statement(rng, n, config.max_depth, config.weights));
    }
    if (solve_all(puzzle).solutions.size() == 1) {
      if (stats) stats->attempts = attempt;
      return puzzle;
    }
  }
  throw GenerationExhausted(n, config.max_attempts);
}

/// `total` puzzles whose character counts cycle min_chars, ..., max_chars,
/// min_chars, ... from a single sequential Rng seeded with `seed`. `base`
/// supplies every setting except num_characters.
inline std::vector<Puzzle> generate_dataset(const GenConfig& base, std::size_t total, std::uint64_t seed,
                                            std::size_t min_chars = kMinGeneratedCharacters,
                                            std::size_t max_chars = kMaxGeneratedCharacters) {
  if (total < 1) throw std::invalid_argument("generate_dataset: total must be >= 1");
  if (min_chars > max_chars) throw std::invalid_argument("generate_dataset: min_chars exceeds max_chars");
  Rng rng(seed);
  GenConfig config = base;
  std::vector<Puzzle> puzzles;
  puzzles.reserve(total);
  const std::size_t span = max_chars - min_chars + 1;
  for (std::size_t i = 0; i < total; ++i) {
    config.num_characters = min_chars + i % span;
    puzzles.push_back(generate_puzzle(config, rng));
  }
  return puzzles;
}

}  // namespace kkforge
