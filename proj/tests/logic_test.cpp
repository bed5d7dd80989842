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

#include "kkforge/logic.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "kkforge/serialize.hpp"
#include "test_support.hpp"

namespace {

using kkforge::Assignment;
using kkforge::CharacterId;
using kkforge::Puzzle;
using kkforge::Role;
using kkforge::SolutionParseError;
using kkforge::Statement;
using kkf_test::worked_answer;
using kkf_test::worked_puzzle;

const CharacterId kLuke{0}, kLiam{1}, kMatthew{2}, kElla{3};

TEST(EvaluateTest, AtomAgainstAssignment) {
  const Assignment ella_knight = {Role::Knight};
  EXPECT_FALSE(kkforge::evaluate(Statement::atom({0}, Role::Knave), ella_knight));
  EXPECT_TRUE(kkforge::evaluate(Statement::atom({0}, Role::Knight), ella_knight));
}

TEST(EvaluateTest, LiamsIffHoldsUnderWorkedAnswer) {
  const auto s = Statement::iff(Statement::atom(kLiam, Role::Knight), Statement::atom(kLuke, Role::Knave));
  EXPECT_TRUE(kkforge::evaluate(s, worked_answer()));
}

TEST(EvaluateTest, SelfImplicationIsTautology) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto x = kkf_test::random_statement(rng, 4, 2);
    const auto s = Statement::implies(x, x);
    for (std::uint32_t m = 0; m < 16; ++m) EXPECT_TRUE(kkforge::evaluate(s, Assignment::from_mask(m, 4)));
  }
}

TEST(EvaluateTest, OutOfRosterAtomThrows) {
  EXPECT_THROW(kkforge::evaluate(Statement::atom({3}, Role::Knight), Assignment{Role::Knight}), std::out_of_range);
}

TEST(EvaluateTest, ConnectiveIdentitiesOnRandomTrees) {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 2000; ++i) {
    const auto a = kkf_test::random_statement(rng, 5, 3);
    const auto b = kkf_test::random_statement(rng, 5, 3);
    const auto s = kkf_test::random_assignment(rng, 5);
    const bool ea = kkforge::evaluate(a, s);
    const bool eb = kkforge::evaluate(b, s);
    EXPECT_EQ(kkforge::evaluate(Statement::iff(a, b), s), ea == eb);
    EXPECT_EQ(kkforge::evaluate(Statement::negation(Statement::implies(a, b)), s), ea && !eb);
  }
}

TEST(ConsistencyTest, WorkedAnswerIsConsistent) {
  EXPECT_TRUE(kkforge::is_consistent(worked_puzzle(), worked_answer()));
}

TEST(ConsistencyTest, ParadoxIsNeverConsistent) {
  const Puzzle p{{"Alice"}, {Statement::atom({0}, Role::Knave)}};
  EXPECT_FALSE(kkforge::is_consistent(p, {Role::Knight}));
  EXPECT_FALSE(kkforge::is_consistent(p, {Role::Knave}));
}

TEST(ConsistencyTest, SelfAffirmationIsAlwaysConsistent) {
  const Puzzle p{{"Alice"}, {Statement::atom({0}, Role::Knight)}};
  EXPECT_TRUE(kkforge::is_consistent(p, {Role::Knight}));
  EXPECT_TRUE(kkforge::is_consistent(p, {Role::Knave}));
}

// Flipping one speaker flips the truth value their own statement must take.
TEST(ConsistencyTest, FlipChangesRequiredTruthOfThatSpeakerOnly) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + trial % 4;
    Puzzle p;
    p.names = kkf_test::roster(n);
    for (std::size_t i = 0; i < n; ++i) p.statements.push_back(kkf_test::random_statement(rng, n, 2));
    const auto asg = kkf_test::random_assignment(rng, n);
    const std::size_t who = trial % n;
    auto flipped = asg;
    flipped.roles[who] = kkforge::opposite(flipped.roles[who]);
    // Speaker `who` is satisfied under `flipped` iff their statement's truth
    // under `flipped` matches the new role.
    const bool required_before = asg[who] == Role::Knight;
    const bool required_after = flipped[who] == Role::Knight;
    EXPECT_NE(required_before, required_after);
    bool all_others_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == who) continue;
      all_others_ok &= kkforge::evaluate(p.statements[i], flipped) == (flipped[i] == Role::Knight);
    }
    const bool self_ok = kkforge::evaluate(p.statements[who], flipped) == required_after;
    EXPECT_EQ(kkforge::is_consistent(p, flipped), all_others_ok && self_ok);
  }
}

TEST(RenderTest, WorkedExampleLines) {
  const auto names = worked_puzzle().names;
  EXPECT_EQ(kkforge::render_statement(Statement::atom(kElla, Role::Knave), names), "Ella is a knave");
  EXPECT_EQ(kkforge::render_statement(
                Statement::iff(Statement::atom(kLiam, Role::Knight), Statement::atom(kLuke, Role::Knave)), names),
            "Liam is a knight if and only if Luke is a knave");
  EXPECT_EQ(kkforge::render_statement(Statement::negation(Statement::atom(kMatthew, Role::Knight)), names),
            "Matthew is not a knight");
}

TEST(RenderTest, CompoundGrammar) {
  const std::vector<std::string> names = {"Ann", "Ben"};
  const auto a = Statement::atom({0}, Role::Knight);
  const auto b = Statement::atom({1}, Role::Knave);
  EXPECT_EQ(kkforge::render_statement(Statement::conj(a, b), names), "Ann is a knight and Ben is a knave");
  EXPECT_EQ(kkforge::render_statement(Statement::disj(a, b), names), "Ann is a knight or Ben is a knave");
  EXPECT_EQ(kkforge::render_statement(Statement::implies(a, b), names), "If Ann is a knight then Ben is a knave");
  EXPECT_EQ(kkforge::render_statement(Statement::negation(Statement::conj(a, b)), names),
            "It is not the case that Ann is a knight and Ben is a knave");
  EXPECT_EQ(kkforge::render_statement(Statement::negation(Statement::implies(a, b)), names),
            "It is not the case that if Ann is a knight then Ben is a knave");
}

TEST(RenderTest, AtomFormsAreInjective) {
  const auto names = kkf_test::roster(7);
  std::set<std::string> seen;
  std::size_t forms = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (Role r : {Role::Knight, Role::Knave}) {
      seen.insert(kkforge::render_statement(Statement::atom({i}, r), names));
      seen.insert(kkforge::render_statement(Statement::negation(Statement::atom({i}, r)), names));
      forms += 2;
    }
  }
  EXPECT_EQ(seen.size(), forms);
}

TEST(SolutionTest, FormatWorkedExample) {
  EXPECT_EQ(kkforge::format_solution(worked_answer(), worked_puzzle().names), kkf_test::kWorkedAnswerText);
  EXPECT_EQ(kkforge::format_solution({Role::Knight}, {"Alice"}), "Alice is a knight");
}

TEST(SolutionTest, ParseWorkedExample) {
  EXPECT_EQ(kkforge::parse_solution(kkf_test::kWorkedAnswerText, worked_puzzle().names), worked_answer());
}

TEST(SolutionTest, ParseIsCaseAndOrderTolerant) {
  EXPECT_EQ(kkforge::parse_solution("ella IS A KNIGHT, luke is a knave, matthew is a knave, liam is a knight",
                                    worked_puzzle().names),
            worked_answer());
  EXPECT_EQ(kkforge::parse_solution("Luke is a knave and Liam is a knight\nMatthew is a knave; Ella is a knight.",
                                    worked_puzzle().names),
            worked_answer());
}

TEST(SolutionTest, ParseStripsFillerBeforeName) {
  EXPECT_EQ(kkforge::parse_solution("So Luke is a knave; Liam is a knight; Matthew is a knave; Ella is a knight",
                                    worked_puzzle().names),
            worked_answer());
}

TEST(SolutionTest, NameContainingAndIsNotSplit) {
  const std::vector<std::string> names = {"Andrew", "Sandy"};
  EXPECT_EQ(kkforge::parse_solution("Andrew is a knight and Sandy is a knave", names),
            (Assignment{Role::Knight, Role::Knave}));
}

TEST(SolutionTest, ParseErrors) {
  const auto names = worked_puzzle().names;
  auto kind_of = [&](const std::string& text) {
    try {
      kkforge::parse_solution(text, names);
    } catch (const SolutionParseError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for: " << text;
    return SolutionParseError::Kind::Unparseable;
  };
  EXPECT_EQ(kind_of("Luke is a knave"), SolutionParseError::Kind::MissingCharacter);
  EXPECT_EQ(kind_of("Luke is a knave; Luke is a knight; Liam is a knight; Matthew is a knave; Ella is a knight"),
            SolutionParseError::Kind::ConflictingRole);
  EXPECT_EQ(kind_of("Zed is a knave; Luke is a knave; Liam is a knight; Matthew is a knave; Ella is a knight"),
            SolutionParseError::Kind::UnknownName);
  EXPECT_EQ(kind_of("I have no idea"), SolutionParseError::Kind::Unparseable);
  EXPECT_EQ(kind_of(""), SolutionParseError::Kind::Unparseable);
}

TEST(SolutionTest, RoundTripOverAllAssignments) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto names = kkf_test::roster(n);
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      const auto a = Assignment::from_mask(m, n);
      EXPECT_EQ(kkforge::parse_solution(kkforge::format_solution(a, names), names), a);
    }
  }
}

TEST(SerializeTest, StatementJsonShape) {
  const auto names = worked_puzzle().names;
  const auto s = Statement::iff(Statement::atom(kLiam, Role::Knight), Statement::atom(kLuke, Role::Knave));
  EXPECT_EQ(kkforge::statement_to_json(s, names).dump(),
            R"({"iff":[{"atom":{"who":"Liam","is":"knight"}},{"atom":{"who":"Luke","is":"knave"}}]})");
  EXPECT_EQ(kkforge::statement_from_json(kkforge::statement_to_json(s, names), names), s);
}

TEST(SerializeTest, PuzzleRoundTripOnRandomPuzzles) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + i % 7;
    Puzzle p;
    p.names = kkf_test::roster(n);
    for (std::size_t k = 0; k < n; ++k) p.statements.push_back(kkf_test::random_statement(rng, n, 3));
    EXPECT_EQ(kkforge::puzzle_from_json(kkforge::puzzle_to_json(p)), p);
  }
}

TEST(SerializeTest, RejectsMalformed) {
  const std::vector<std::string> names = {"A"};
  using kkforge::FormatError;
  using kkforge::Json;
  EXPECT_THROW(kkforge::statement_from_json(Json::parse(R"({"xor":[]})"), names), FormatError);
  EXPECT_THROW(kkforge::statement_from_json(Json::parse(R"({"atom":{"who":"B","is":"knight"}})"), names), FormatError);
  EXPECT_THROW(kkforge::statement_from_json(Json::parse(R"({"atom":{"who":"A","is":"king"}})"), names), FormatError);
  EXPECT_THROW(kkforge::statement_from_json(Json::parse(R"({"and":[{"atom":{"who":"A","is":"knight"}}]})"), names),
               FormatError);
  EXPECT_THROW(kkforge::puzzle_from_json(Json::parse(R"({"names":["A","A"],"statements":[)"
                                                     R"({"atom":{"who":"A","is":"knight"}},)"
                                                     R"({"atom":{"who":"A","is":"knight"}}]})")),
               FormatError);
}

TEST(PuzzleTest, ValidateRejectsBadShapes) {
  EXPECT_THROW((Puzzle{{}, {}}).validate(), std::invalid_argument);
  EXPECT_THROW((Puzzle{{"A"}, {}}).validate(), std::invalid_argument);
  EXPECT_THROW((Puzzle{{"A"}, {Statement::atom({1}, Role::Knight)}}).validate(), std::invalid_argument);
}

}  // namespace
