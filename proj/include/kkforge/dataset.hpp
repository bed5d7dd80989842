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

// Training/eval records: question and prompt rendering, canonical answers,
// seeded train/eval split and JSONL I/O.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kkforge/logic.hpp"
#include "kkforge/prompt_template.hpp"
#include "kkforge/rng.hpp"
#include "kkforge/serialize.hpp"
#include "kkforge/solver.hpp"
#include "kkforge/version.hpp"

namespace kkforge {

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::string count_word(std::size_t n) {
  static constexpr std::string_view kWords[] = {"zero", "one", "two",   "three", "four", "five",
                                                "six",  "seven", "eight", "nine", "ten"};
  return n < std::size(kWords) ? std::string(kWords[n]) : std::to_string(n);
}

// "A", "A and B", "A, B, and C".
inline std::string and_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += items.size() == 2 ? " and " : (i + 1 == items.size() ? ", and " : ", ");
    out += items[i];
  }
  return out;
}

}  // namespace detail

/// Island preamble, one `Name says: "..."` line per speaker, and the closing
/// question. Lines end in "\n" except the last.
inline std::string render_question(const Puzzle& puzzle) {
  puzzle.validate();
  const auto n = puzzle.size();
  std::string out =
      "A very special island is inhabited only by knights and knaves. "
      "Knights always tell the truth, and knaves always lie. You meet ";
  out += detail::count_word(n);
  out += n == 1 ? " inhabitant: " : " inhabitants: ";
  out += detail::and_list(puzzle.names);
  out += ".\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += puzzle.names[i];
    out += " says: \"";
    out += render_statement(puzzle.statements[i], puzzle.names);
    out += ".\"\n";
  }
  out += "Who is a knight and who is a knave?";
  return out;
}

/// The prompt asset with its "{prompt}" slot replaced by `question`.
inline std::string render_prompt(std::string_view question) {
  static constexpr std::string_view kSlot = "{prompt}";
  const auto at = kPromptTemplate.find(kSlot);
  std::string out;
  out.reserve(kPromptTemplate.size() + question.size());
  out += kPromptTemplate.substr(0, at);
  out += question;
  out += kPromptTemplate.substr(at + kSlot.size());
  return out;
}

/// 64-bit FNV-1a, lowercase hex.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string template_hash() { return "fnv1a64:" + fnv1a_hex(kPromptTemplate); }

// ---------------------------------------------------------------------------
// Records

enum class Split { Train, Eval };

inline std::string_view split_name(Split s) { return s == Split::Train ? "train" : "eval"; }

struct DatasetRecord {
  std::string id;
  std::size_t num_characters = 0;
  Puzzle puzzle;
  std::string question;
  std::string prompt;
  std::string answer;
  Split split = Split::Train;
  std::optional<std::string> trace;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// Record for the puzzle at `index` of a dataset generated from `seed`. The
/// puzzle must be uniquely solvable.
inline DatasetRecord make_record(const Puzzle& puzzle, std::uint64_t seed, std::size_t index) {
  DatasetRecord r;
  r.id = "kk-" + std::to_string(seed) + "-" + std::to_string(index);
  r.num_characters = puzzle.size();
  r.puzzle = puzzle;
  r.question = render_question(puzzle);
  r.prompt = render_prompt(r.question);
  r.answer = format_solution(solve_unique(puzzle), puzzle.names);
  return r;
}

inline std::vector<DatasetRecord> make_records(const std::vector<Puzzle>& puzzles, std::uint64_t seed) {
  std::vector<DatasetRecord> out;
  out.reserve(puzzles.size());
  for (std::size_t i = 0; i < puzzles.size(); ++i) out.push_back(make_record(puzzles[i], seed, i));
  return out;
}

struct SplitResult {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> eval;
};

/// Number of training records for `n` records at `fraction`, i.e.
/// floor(fraction * n). A 1e-9 slack absorbs binary rounding of decimal
/// fractions such as 0.29 * 100.
inline std::size_t train_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

/// Seeded shuffle, then the first floor(fraction * N) records become train and
/// the rest eval. Each record's split field is set accordingly.
inline SplitResult split_dataset(std::vector<DatasetRecord> records, double train_fraction, std::uint64_t seed) {
  if (records.empty()) throw std::invalid_argument("split_dataset: no records");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split_dataset: train_fraction must be in (0, 1)");
  }
  Rng rng(seed);
  rng.shuffle(std::span<DatasetRecord>(records));
  const auto cut = train_count(records.size(), train_fraction);
  SplitResult out;
  out.train.reserve(cut);
  out.eval.reserve(records.size() - cut);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].split = i < cut ? Split::Train : Split::Eval;
    (i < cut ? out.train : out.eval).push_back(std::move(records[i]));
  }
  return out;
}

inline Json record_to_json(const DatasetRecord& r) {
  Json j{{"id", r.id},
         {"num_characters", r.num_characters},
         {"puzzle", puzzle_to_json(r.puzzle)},
         {"question", r.question},
         {"prompt", r.prompt},
         {"answer", r.answer},
         {"split", std::string(split_name(r.split))}};
  if (r.trace) j["trace"] = *r.trace;
  return j;
}

inline DatasetRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("record must be a JSON object");
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw FormatError(std::string("record field \"") + key + "\" must be a string");
    return j[key].get<std::string>();
  };
  DatasetRecord r;
  r.id = str("id");
  if (!j.contains("num_characters") || !j["num_characters"].is_number_unsigned()) {
    throw FormatError("record field \"num_characters\" must be a non-negative integer");
  }
  r.num_characters = j["num_characters"].get<std::size_t>();
  if (!j.contains("puzzle")) throw FormatError("record field \"puzzle\" is missing");
  r.puzzle = puzzle_from_json(j["puzzle"]);
  r.question = str("question");
  r.prompt = str("prompt");
  r.answer = str("answer");
  const auto split = str("split");
  if (split == "train") r.split = Split::Train;
  else if (split == "eval") r.split = Split::Eval;
  else throw FormatError("record field \"split\" must be \"train\" or \"eval\"");
  if (j.contains("trace")) {
    if (!j["trace"].is_string()) throw FormatError("record field \"trace\" must be a string");
    r.trace = j["trace"].get<std::string>();
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSONL

class JsonlError : public std::runtime_error {
 public:
  JsonlError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line number, or 0 for file-level errors.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses one JSON object per line. Blank lines are skipped.
inline std::vector<Json> parse_jsonl(std::istream& in) {
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw JsonlError(lineno, std::string("malformed JSON: ") + e.what());
    }
  }
  return out;
}

inline std::vector<Json> read_jsonl_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw JsonlError(0, "cannot open '" + path.string() + "' for reading");
  return parse_jsonl(in);
}

inline void write_jsonl_values(const std::vector<Json>& values, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw JsonlError(0, "cannot open '" + path.string() + "' for writing");
  for (const auto& v : values) out << v.dump() << '\n';
  out.flush();
  if (!out) throw JsonlError(0, "write to '" + path.string() + "' failed");
}

inline void write_jsonl(const std::vector<DatasetRecord>& records, const std::filesystem::path& path) {
  std::vector<Json> values;
  values.reserve(records.size());
  for (const auto& r : records) values.push_back(record_to_json(r));
  write_jsonl_values(values, path);
}

inline std::vector<DatasetRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw JsonlError(0, "cannot open '" + path.string() + "' for reading");
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw JsonlError(lineno, std::string("malformed JSON: ") + e.what());
    } catch (const FormatError& e) {
      throw JsonlError(lineno, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

struct DatasetManifest {
  std::uint64_t seed = 0;
  std::size_t total = 0;
  std::map<std::size_t, std::size_t> per_count;
  double train_fraction = 0.0;
  std::string template_hash;
  std::string tool_version;
};

inline DatasetManifest make_manifest(const std::vector<DatasetRecord>& records, std::uint64_t seed,
                                     double train_fraction) {
  DatasetManifest m;
  m.seed = seed;
  m.total = records.size();
  for (const auto& r : records) ++m.per_count[r.num_characters];
  m.train_fraction = train_fraction;
  m.template_hash = template_hash();
  m.tool_version = std::string(kVersion);
  return m;
}

inline Json manifest_to_json(const DatasetManifest& m) {
  Json per_count = Json::object();
  for (const auto& [n, count] : m.per_count) per_count[std::to_string(n)] = count;
  return Json{{"seed", m.seed},
              {"total", m.total},
              {"per_count", std::move(per_count)},
              {"train_fraction", m.train_fraction},
              {"template_hash", m.template_hash},
              {"tool_version", m.tool_version}};
}

}  // namespace kkforge
