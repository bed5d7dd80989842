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

#include "kkforge/generator.hpp"

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "kkforge/serialize.hpp"
#include "test_support.hpp"

namespace {

using kkforge::GenConfig;
using kkforge::Rng;
using kkforge::Statement;

// The first outputs of std::mt19937_64 seeded with its default seed are fixed
// by the standard; the 10000th is 9981545732273789042.
TEST(RngTest, EngineIsTheStandardSequence) {
  Rng rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next();
  EXPECT_EQ(x, 9981545732273789042ull);
}

TEST(RngTest, BelowIsInRangeAndCoversIt) {
  Rng rng(3);
  std::array<int, 7> hits{};
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(RngTest, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 64; ++s) seeds.insert(kkforge::derive_seed(7, s));
  EXPECT_EQ(seeds.size(), 64u);
  EXPECT_EQ(kkforge::derive_seed(7, 3), kkforge::derive_seed(7, 3));
}

TEST(SampleStatementTest, DepthZeroIsAlwaysAnAtom) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(kkforge::sample_statement(rng, 5, 0).is_atom());
}

TEST(SampleStatementTest, RespectsDepth) {
  Rng rng(2);
  for (int d = 0; d <= 3; ++d) {
    for (int i = 0; i < 500; ++i) EXPECT_LE(kkforge::sample_statement(rng, 4, d).depth(), d);
  }
}

TEST(SampleStatementTest, GoldenSeed42Roster4Depth2) {
  Rng rng(42);
  const auto s = kkforge::sample_statement(rng, 4, 2);
  const std::vector<std::string> names = {"A", "B", "C", "D"};
  EXPECT_EQ(kkforge::statement_to_json(s, names).dump(), R"({"atom":{"who":"A","is":"knave"}})");
  Rng again(42);
  EXPECT_EQ(kkforge::sample_statement(again, 4, 2), s);
}

TEST(SampleStatementTest, NodeKindFrequenciesMatchWeights) {
  Rng rng(123);
  std::array<int, 6> counts{};
  constexpr int kDraws = 100'000;
  for (int i = 0; i < kDraws; ++i) ++counts[static_cast<int>(kkforge::sample_statement(rng, 5, 1).kind())];
  // Atom, Not, And, Or, Implies, Iff.
  const std::array<double, 6> expected = {0.30, 0.10, 0.15, 0.15, 0.15, 0.15};
  double chi2 = 0;
  for (int k = 0; k < 6; ++k) {
    const double freq = static_cast<double>(counts[k]) / kDraws;
    EXPECT_NEAR(freq, expected[k], 0.01) << "kind " << k;
    const double e = expected[k] * kDraws;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  // 5 degrees of freedom, p = 0.001 critical value.
  EXPECT_LT(chi2, 20.52);
}

TEST(GeneratePuzzleTest, OutputIsUniquelySolvableAndWellFormed) {
  Rng rng(8);
  for (std::size_t n = 3; n <= 7; ++n) {
    GenConfig config;
    config.num_characters = n;
    for (int i = 0; i < 40; ++i) {
      const auto p = kkforge::generate_puzzle(config, rng);
      ASSERT_EQ(p.size(), n);
      EXPECT_EQ(kkf_test::oracle_solutions(kkforge::puzzle_to_json(p)).size(), 1u);
      EXPECT_EQ(std::set<std::string>(p.names.begin(), p.names.end()).size(), n);
      for (const auto& s : p.statements) EXPECT_LE(s.depth(), config.max_depth);
    }
  }
}

TEST(GeneratePuzzleTest, GoldenSeed7FourCharacters) {
  GenConfig config;
  config.num_characters = 4;
  Rng a(7), b(7);
  const auto p = kkforge::generate_puzzle(config, a);
  EXPECT_EQ(kkforge::puzzle_to_json(p).dump(), kkforge::puzzle_to_json(kkforge::generate_puzzle(config, b)).dump());
  EXPECT_EQ(kkforge::puzzle_to_json(p).dump(), R"({"names":["Wyatt","Emma","Isabella","Emily"],"statements":[{"iff":[{"atom":{"who":"Emma","is":"knave"}},{"implies":[{"atom":{"who":"Isabella","is":"knave"}},{"atom":{"who":"Emily","is":"knight"}}]}]},{"or":[{"or":[{"atom":{"who":"Wyatt","is":"knight"}},{"atom":{"who":"Emma","is":"knave"}}]},{"atom":{"who":"Wyatt","is":"knave"}}]},{"and":[{"or":[{"atom":{"who":"Wyatt","is":"knight"}},{"atom":{"who":"Emma","is":"knave"}}]},{"implies":[{"atom":{"who":"Emily","is":"knave"}},{"atom":{"who":"Isabella","is":"knight"}}]}]},{"atom":{"who":"Isabella","is":"knave"}}]})");
}

TEST(GeneratePuzzleTest, RejectionCountGrowsWithRosterSize) {
  auto mean_rejections = [](std::size_t n) {
    GenConfig config;
    config.num_characters = n;
    Rng rng(1000 + n);
    double total = 0;
    for (int i = 0; i < 1000; ++i) {
      kkforge::GenerationStats stats;
      kkforge::generate_puzzle(config, rng, &stats);
      total += static_cast<double>(stats.rejections());
    }
    return total / 1000.0;
  };
  const double r3 = mean_rejections(3);
  const double r7 = mean_rejections(7);
  RecordProperty("mean_rejections_n3", std::to_string(r3));
  RecordProperty("mean_rejections_n7", std::to_string(r7));
  std::printf("mean rejections: n=3 %.3f, n=7 %.3f\n", r3, r7);
  EXPECT_GT(r7, r3);
}

TEST(GeneratePuzzleTest, ExhaustionIsReported) {
  GenConfig config;
  config.num_characters = 3;
  config.max_attempts = 1;
  // Atom-only statements with a single attempt miss uniqueness often enough
  // to hit the cap.
  config.weights = {1, 0, 0, 0, 0, 0};
  Rng rng(0);
  bool exhausted = false;
  for (int i = 0; i < 50 && !exhausted; ++i) {
    try {
      kkforge::generate_puzzle(config, rng);
    } catch (const kkforge::GenerationExhausted&) {
      exhausted = true;
    }
  }
  EXPECT_TRUE(exhausted);
}

TEST(GenConfigTest, Validation) {
  GenConfig c;
  c.num_characters = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.num_characters = 8;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = GenConfig{};
  c.name_pool = {"A", "B", "C", "D", "E", "F"};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = GenConfig{};
  c.max_depth = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = GenConfig{};
  c.max_attempts = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_GE(kkforge::default_name_pool().size(), 40u);
  EXPECT_NO_THROW(GenConfig{}.validate());
}

TEST(GenerateDatasetTest, CyclesCharacterCounts) {
  const auto puzzles = kkforge::generate_dataset(GenConfig{}, 25, 3);
  ASSERT_EQ(puzzles.size(), 25u);
  std::array<int, 8> per{};
  for (std::size_t i = 0; i < puzzles.size(); ++i) {
    EXPECT_EQ(puzzles[i].size(), 3 + i % 5);
    ++per[puzzles[i].size()];
  }
  for (std::size_t n = 3; n <= 7; ++n) EXPECT_EQ(per[n], 5);
  EXPECT_THROW(kkforge::generate_dataset(GenConfig{}, 0, 3), std::invalid_argument);
}

TEST(GenerateDatasetTest, DeterministicForSeed) {
  const auto a = kkforge::generate_dataset(GenConfig{}, 10, 77);
  const auto b = kkforge::generate_dataset(GenConfig{}, 10, 77);
  const auto c = kkforge::generate_dataset(GenConfig{}, 10, 78);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

}  // namespace
