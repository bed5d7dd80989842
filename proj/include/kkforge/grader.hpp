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

// Answer extraction and binary verifiable rewards.
//
// Rewards are 0 or 1 with no partial credit. Graders never throw on completion
// text; every failure is reward 0 plus a stable reason code. Preconditions on
// the gold side (a well-formed letter, a roster for K&K) are programming
// errors and throw std::invalid_argument.

#pragma once

#include <cctype>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kkforge/logic.hpp"
#include "kkforge/numeric.hpp"

namespace kkforge {

enum class TaskKind { KK, MCQ, Numeric };

inline std::string_view task_name(TaskKind t) {
  switch (t) {
    case TaskKind::KK: return "kk";
    case TaskKind::MCQ: return "mcq";
    case TaskKind::Numeric: return "numeric";
  }
  return "";
}

inline std::optional<TaskKind> parse_task(std::string_view s) {
  if (s == "kk") return TaskKind::KK;
  if (s == "mcq") return TaskKind::MCQ;
  if (s == "numeric") return TaskKind::Numeric;
  return std::nullopt;
}

/// How the answer span was located.
enum class Via { AnswerTagBoxed, AnswerTag, BoxedOnly, None };

inline std::string_view via_name(Via v) {
  switch (v) {
    case Via::AnswerTagBoxed: return "AnswerTagBoxed";
    case Via::AnswerTag: return "AnswerTag";
    case Via::BoxedOnly: return "BoxedOnly";
    case Via::None: return "None";
  }
  return "";
}

struct Extraction {
  std::string raw_completion;
  std::optional<std::string> answer_span;  // absent iff via == None
  Via via = Via::None;
  std::vector<std::string> diagnostics;
};

namespace reason {
inline constexpr std::string_view kOk = "ok";
inline constexpr std::string_view kNoAnswerTag = "no-answer-tag";
inline constexpr std::string_view kUnparseableSolution = "unparseable-solution";
inline constexpr std::string_view kMissingCharacter = "missing-character";
inline constexpr std::string_view kConflictingRole = "conflicting-role";
inline constexpr std::string_view kWrongAssignment = "wrong-assignment";
inline constexpr std::string_view kNotABareLetter = "not-a-bare-letter";
inline constexpr std::string_view kWrongLetter = "wrong-letter";
inline constexpr std::string_view kValueMismatch = "value-mismatch";
inline constexpr std::string_view kFormatGate = "format-gate";
}  // namespace reason

struct GradeResult {
  int reward = 0;
  bool correct = false;
  Extraction extraction;
  std::string reason;
};

// ---------------------------------------------------------------------------
// Extraction

namespace detail {

struct Span {
  std::size_t begin;
  std::size_t end;
};

// Top-level \boxed{...} payloads in order; unbalanced groups are skipped.
inline std::vector<Span> boxed_payloads(std::string_view s, std::vector<std::string>* notes) {
  static constexpr std::string_view kBoxed = "\\boxed{";
  std::vector<Span> out;
  std::size_t from = 0;
  while ((from = s.find(kBoxed, from)) != std::string_view::npos) {
    const std::size_t open = from + kBoxed.size() - 1;
    const std::size_t close = match_brace(s, open);
    if (close == std::string_view::npos) {
      if (notes) notes->push_back("unbalanced \\boxed{ ignored");
      from = open + 1;
      continue;
    }
    out.push_back({open + 1, close - 1});
    from = close;
  }
  return out;
}

}  // namespace detail

/// Locates the final answer. The last complete <answer>...</answer> block wins;
/// inside it the last \boxed{} payload wins over the bare block text. Without
/// an answer block, the last \boxed{} anywhere is used.
inline Extraction extract_answer(std::string_view completion) {
  static constexpr std::string_view kOpen = "<answer>";
  static constexpr std::string_view kClose = "</answer>";
  Extraction ex;
  ex.raw_completion = std::string(completion);

  std::optional<detail::Span> block;
  std::size_t blocks = 0;
  std::size_t from = 0;
  while (true) {
    const auto open = completion.find(kOpen, from);
    if (open == std::string_view::npos) break;
    const auto close = completion.find(kClose, open + kOpen.size());
    if (close == std::string_view::npos) {
      ex.diagnostics.push_back("unclosed <answer> tag ignored");
      break;
    }
    block = detail::Span{open + kOpen.size(), close};
    ++blocks;
    from = close + kClose.size();
  }
  if (blocks > 1) ex.diagnostics.push_back(std::to_string(blocks) + " answer blocks; using the last");

  auto take_boxed = [&](std::string_view region, Via via) {
    const auto boxes = detail::boxed_payloads(region, &ex.diagnostics);
    if (boxes.empty()) return false;
    if (boxes.size() > 1) ex.diagnostics.push_back(std::to_string(boxes.size()) + " \\boxed groups; using the last");
    const auto& last = boxes.back();
    ex.answer_span = std::string(detail::trim_ws(region.substr(last.begin, last.end - last.begin)));
    ex.via = via;
    return true;
  };

  if (block) {
    const auto region = completion.substr(block->begin, block->end - block->begin);
    if (!take_boxed(region, Via::AnswerTagBoxed)) {
      ex.answer_span = std::string(detail::trim_ws(region));
      ex.via = Via::AnswerTag;
    }
    return ex;
  }
  take_boxed(completion, Via::BoxedOnly);
  return ex;
}

// ---------------------------------------------------------------------------
// Task graders

namespace detail {

inline GradeResult finish(Extraction ex, bool correct, std::string_view why) {
  GradeResult g;
  g.reward = correct ? 1 : 0;
  g.correct = correct;
  g.extraction = std::move(ex);
  g.reason = std::string(why);
  return g;
}

inline std::string_view strip_punct(std::string_view s) {
  auto junk = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isspace(u) || std::ispunct(u);
  };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && junk(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Reward 1 iff the extracted span parses to exactly `gold` over `names`.
inline GradeResult grade_kk(std::string_view completion, const Assignment& gold, const std::vector<std::string>& names) {
  if (gold.size() != names.size()) throw std::invalid_argument("grade_kk: gold does not cover the roster");
  auto ex = extract_answer(completion);
  if (!ex.answer_span) return detail::finish(std::move(ex), false, reason::kNoAnswerTag);
  try {
    const auto got = parse_solution(*ex.answer_span, names);
    const bool ok = got == gold;
    return detail::finish(std::move(ex), ok, ok ? reason::kOk : reason::kWrongAssignment);
  } catch (const SolutionParseError& e) {
    using K = SolutionParseError::Kind;
    ex.diagnostics.push_back(e.what());
    switch (e.kind()) {
      case K::MissingCharacter: return detail::finish(std::move(ex), false, reason::kMissingCharacter);
      case K::ConflictingRole: return detail::finish(std::move(ex), false, reason::kConflictingRole);
      default: return detail::finish(std::move(ex), false, reason::kUnparseableSolution);
    }
  }
}

/// Uppercased single letter left after stripping whitespace and punctuation,
/// or nullopt.
inline std::optional<char> normalize_choice(std::string_view span) {
  const auto s = detail::strip_punct(span);
  if (s.size() != 1 || !std::isalpha(static_cast<unsigned char>(s.front()))) return std::nullopt;
  return static_cast<char>(std::toupper(static_cast<unsigned char>(s.front())));
}

/// Reward 1 iff the span is exactly the gold option letter after trimming
/// punctuation and whitespace; "The answer is C" scores 0.
inline GradeResult grade_mcq(std::string_view completion, char gold_letter) {
  gold_letter = static_cast<char>(std::toupper(static_cast<unsigned char>(gold_letter)));
  if (gold_letter < 'A' || gold_letter > 'J') throw std::invalid_argument("grade_mcq: gold letter must be A..J");
  auto ex = extract_answer(completion);
  if (!ex.answer_span) return detail::finish(std::move(ex), false, reason::kNoAnswerTag);
  const auto letter = normalize_choice(*ex.answer_span);
  if (!letter) return detail::finish(std::move(ex), false, reason::kNotABareLetter);
  const bool ok = *letter == gold_letter;
  return detail::finish(std::move(ex), ok, ok ? reason::kOk : reason::kWrongLetter);
}

inline GradeResult grade_numeric(std::string_view completion, std::string_view gold) {
  auto ex = extract_answer(completion);
  if (!ex.answer_span) return detail::finish(std::move(ex), false, reason::kNoAnswerTag);
  if (!parse_numeric(*ex.answer_span) || !parse_numeric(gold)) {
    ex.diagnostics.push_back("outside the value grammar; compared as normalized strings");
  }
  const bool ok = answers_equivalent(*ex.answer_span, gold);
  return detail::finish(std::move(ex), ok, ok ? reason::kOk : reason::kValueMismatch);
}

struct RewardOptions {
  /// Require an <answer> block; a \boxed{} found outside one earns 0.
  bool strict_format = false;
};

/// Dispatches to the task grader. `gold` is the canonical solution string for
/// K&K (parsed over `names`), an option letter for MCQ, or a value for numeric.
inline GradeResult reward(TaskKind task, std::string_view completion, std::string_view gold,
                          const std::vector<std::string>* names = nullptr, RewardOptions options = {}) {
  GradeResult g;
  switch (task) {
    case TaskKind::KK: {
      if (!names) throw std::invalid_argument("reward: K&K grading needs the roster");
      Assignment gold_asg;
      try {
        gold_asg = parse_solution(gold, *names);
      } catch (const SolutionParseError& e) {
        throw std::invalid_argument(std::string("reward: gold solution does not parse: ") + e.what());
      }
      g = grade_kk(completion, gold_asg, *names);
      break;
    }
    case TaskKind::MCQ: {
      const auto letter = normalize_choice(gold);
      if (!letter) throw std::invalid_argument("reward: MCQ gold must be a single option letter");
      g = grade_mcq(completion, *letter);
      break;
    }
    case TaskKind::Numeric:
      g = grade_numeric(completion, gold);
      break;
  }
  if (options.strict_format && g.extraction.via == Via::BoxedOnly) {
    g.reward = 0;
    g.correct = false;
    g.reason = std::string(reason::kFormatGate);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Group advantages

/// Rewards minus their group mean, with no standard-deviation or length
/// normalization.
inline std::vector<double> group_advantages(std::span<const double> rewards) {
  if (rewards.empty()) throw std::invalid_argument("group_advantages: empty group");
  long double sum = 0;
  for (double r : rewards) sum += r;
  const double mean = static_cast<double>(sum / static_cast<long double>(rewards.size()));
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back(r - mean);
  return out;
}

inline constexpr std::size_t kDefaultGroupSize = 10;

}  // namespace kkforge
