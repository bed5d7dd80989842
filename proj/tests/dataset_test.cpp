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


#include "kkforge/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gtest/gtest.h"
#include "kkforge/generator.hpp"
#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;
using kkforge::DatasetRecord;
using kkforge::Split;

std::vector<DatasetRecord> sample_records(std::size_t total, std::uint64_t seed) {
  return kkforge::make_records(kkforge::generate_dataset({}, total, seed), seed);
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("kkf_dataset_" + std::to_string(::getpid()) + "_" + name);
}

TEST(RenderTest, QuestionMatchesWorkedExampleUpToWhitespace) {
  const auto q = kkforge::render_question(kkf_test::worked_puzzle());
  EXPECT_EQ(kkf_test::collapse_whitespace(q), kkf_test::collapse_whitespace(kkf_test::kWorkedQuestion));
}

TEST(RenderTest, OneSaysLinePerCharacter) {
  kkforge::Rng rng(5);
  kkforge::GenConfig config;
  config.num_characters = 3;
  const auto q = kkforge::render_question(kkforge::generate_puzzle(config, rng));
  std::size_t says = 0;
  for (auto at = q.find(" says: \""); at != std::string::npos; at = q.find(" says: \"", at + 1)) ++says;
  EXPECT_EQ(says, 3u);
  EXPECT_NE(q.find("You meet three inhabitants: "), std::string::npos);
  EXPECT_TRUE(q.ends_with("Who is a knight and who is a knave?"));
}

TEST(RenderTest, PromptWrapsTheQuestion) {
  const auto q = kkforge::render_question(kkf_test::worked_puzzle());
  const auto p = kkforge::render_prompt(q);
  EXPECT_NE(p.find("A conversation between User and Assistant"), std::string::npos);
  EXPECT_NE(p.find("<answer>"), std::string::npos);
  EXPECT_NE(p.find(q), std::string::npos);
  EXPECT_TRUE(p.ends_with("Assistant: <think> </answer>"));
}

TEST(RenderTest, TemplateIsTheAssetFile) {
  auto asset = kkf_test::slurp(KKF_PROMPT_ASSET);
  ASSERT_FALSE(asset.empty());
  if (asset.ends_with("\n")) asset.pop_back();
  EXPECT_EQ(std::string(kkforge::kPromptTemplate), asset);
  EXPECT_EQ(kkforge::template_hash(), "fnv1a64:" + kkforge::fnv1a_hex(asset));
}

TEST(RenderTest, FnvKnownVectors) {
  EXPECT_EQ(kkforge::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(kkforge::fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(RecordTest, AnswerIsTheUniqueSolution) {
  const auto r = kkforge::make_record(kkf_test::worked_puzzle(), 3, 9);
  EXPECT_EQ(r.id, "kk-3-9");
  EXPECT_EQ(r.num_characters, 4u);
  EXPECT_EQ(r.answer, kkf_test::kWorkedAnswerText);
}

TEST(SplitTest, CountsFollowTheFloorOfTheFraction) {
  EXPECT_EQ(kkforge::train_count(5000, 0.9), 4500u);
  EXPECT_EQ(kkforge::train_count(2, 0.5), 1u);
  EXPECT_EQ(kkforge::train_count(100, 0.29), 29u);
  EXPECT_EQ(kkforge::train_count(7, 0.5), 3u);

  auto two = sample_records(2, 1);
  const auto s = kkforge::split_dataset(two, 0.5, 1);
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_EQ(s.eval.size(), 1u);
}

TEST(SplitTest, RejectsEmptyInputAndBadFractions) {
  EXPECT_THROW(kkforge::split_dataset({}, 0.9, 1), std::invalid_argument);
  auto r = sample_records(3, 1);
  EXPECT_THROW(kkforge::split_dataset(r, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(kkforge::split_dataset(r, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(kkforge::split_dataset(r, 1.5, 1), std::invalid_argument);
}

TEST(SplitTest, DeterministicDisjointAndExhaustive) {
  const auto records = sample_records(40, 17);
  const auto a = kkforge::split_dataset(records, 0.75, 4);
  const auto b = kkforge::split_dataset(records, 0.75, 4);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.eval, b.eval);
  EXPECT_EQ(a.train.size(), 30u);
  std::set<std::string> train_ids, eval_ids;
  for (const auto& r : a.train) {
    EXPECT_EQ(r.split, Split::Train);
    train_ids.insert(r.id);
  }
  for (const auto& r : a.eval) {
    EXPECT_EQ(r.split, Split::Eval);
    EXPECT_FALSE(train_ids.contains(r.id));
    eval_ids.insert(r.id);
  }
  EXPECT_EQ(train_ids.size() + eval_ids.size(), records.size());
  const auto c = kkforge::split_dataset(records, 0.75, 5);
  EXPECT_NE(a.train, c.train);
}

TEST(JsonlTest, RoundTripIsLossless) {
  auto records = sample_records(25, 8);
  records[3].trace = "Luke says ...\nso Liam is a knight.";
  const auto path = temp_path("roundtrip.jsonl");
  kkforge::write_jsonl(records, path);
  const auto back = kkforge::read_jsonl(path);
  EXPECT_EQ(back, records);
  fs::remove(path);
}

TEST(JsonlTest, MalformedLineIsReportedByNumber) {
  const auto records = sample_records(2, 8);
  std::string text = kkforge::record_to_json(records[0]).dump() + "\n\n{\"id\": oops\n";
  const auto path = temp_path("bad.jsonl");
  {
    std::ofstream(path) << text;
  }
  try {
    kkforge::read_jsonl(path);
    FAIL() << "expected JsonlError";
  } catch (const kkforge::JsonlError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream plain("{}\n[1,2]\nnot json\n");
  try {
    kkforge::parse_jsonl(plain);
    FAIL() << "expected JsonlError";
  } catch (const kkforge::JsonlError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  fs::remove(path);
}

TEST(JsonlTest, MissingFieldIsAFormatError) {
  auto j = kkforge::record_to_json(sample_records(1, 2)[0]);
  j.erase("answer");
  EXPECT_THROW(kkforge::record_from_json(j), kkforge::FormatError);
  j = kkforge::record_to_json(sample_records(1, 2)[0]);
  j["split"] = "test";
  EXPECT_THROW(kkforge::record_from_json(j), kkforge::FormatError);
}

TEST(ManifestTest, CountsPerRosterSize) {
  const auto records = sample_records(12, 3);
  const auto m = kkforge::manifest_to_json(kkforge::make_manifest(records, 3, 0.9));
  EXPECT_EQ(m["total"], 12);
  EXPECT_EQ(m["per_count"]["3"], 3);
  EXPECT_EQ(m["per_count"]["4"], 3);
  EXPECT_EQ(m["per_count"]["7"], 2);
  EXPECT_EQ(m["template_hash"], kkforge::template_hash());
  EXPECT_EQ(m["tool_version"], KKF_BUILD_VERSION);
}

// Five records from seed 11 in the order the CLI writes them: train, then eval.
TEST(GoldenTest, FiveRecordsSeed11) {
  auto split = kkforge::split_dataset(sample_records(5, 11), 0.6, 11);
  std::vector<DatasetRecord> all = std::move(split.train);
  all.insert(all.end(), split.eval.begin(), split.eval.end());
  std::string text;
  for (const auto& r : all) text += kkforge::record_to_json(r).dump() + "\n";
  const auto golden = kkf_test::slurp(std::string(KKF_GOLDEN_DIR) + "/dataset_total5_seed11.jsonl");
  ASSERT_FALSE(golden.empty()) << "missing golden file";
  EXPECT_EQ(text, golden);
}

}  // namespace
