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

// Multi-sample accuracy: every question is answered once per sampling round,
// accuracy is computed per round, and the report carries the mean and the
// population standard deviation across rounds.

#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kkforge/grader.hpp"
#include "kkforge/serialize.hpp"

namespace kkforge {

struct CompletionRecord {
  std::string question_id;
  std::size_t round = 0;
  std::string completion;
};

struct GoldRecord {
  std::string question_id;
  std::optional<TaskKind> task;  // falls back to the run's task when absent
  std::string gold;
  std::optional<std::vector<std::string>> names;
};

struct EvalReport {
  std::size_t k = 0;
  std::vector<double> per_round_accuracy;
  double mean = 0.0;
  double stddev = 0.0;  // population form
  std::map<std::string, double> per_question;
  std::size_t n_questions = 0;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grades every completion and aggregates per round. The number of rounds is
/// one more than the largest round index seen; every (question, round) pair
/// must appear exactly once.
inline EvalReport evaluate_run(const std::vector<CompletionRecord>& completions,
                               const std::map<std::string, GoldRecord>& gold, TaskKind task,
                               RewardOptions options = {}) {
  if (gold.empty()) throw EvalError("evaluate_run: no gold questions");
  if (completions.empty()) throw EvalError("evaluate_run: no completions");

  std::size_t k = 0;
  std::set<std::string> unknown;
  for (const auto& c : completions) {
    if (!gold.contains(c.question_id)) unknown.insert(c.question_id);
    k = std::max(k, c.round + 1);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown question_id:";
    for (const auto& id : unknown) msg += " " + id;
    throw EvalError(msg);
  }
  for (const auto& [id, g] : gold) {
    if (g.task && *g.task != task) {
      throw EvalError("question " + id + " is tagged '" + std::string(task_name(*g.task)) + "' but the run grades '" +
                      std::string(task_name(task)) + "'");
    }
  }

  // (question, round) -> reward
  std::map<std::pair<std::string, std::size_t>, int> graded;
  std::vector<std::string> duplicates;
  for (const auto& c : completions) {
    const auto key = std::make_pair(c.question_id, c.round);
    if (graded.contains(key)) {
      duplicates.push_back(c.question_id + "@" + std::to_string(c.round));
      continue;
    }
    const auto& g = gold.at(c.question_id);
    const auto* names = g.names ? &*g.names : nullptr;
    try {
      graded[key] = reward(task, c.completion, g.gold, names, options).reward;
    } catch (const std::invalid_argument& e) {
      throw EvalError("question " + c.question_id + ": " + e.what());
    }
  }
  if (!duplicates.empty()) {
    std::string msg = "duplicate (question, round) pairs:";
    for (const auto& d : duplicates) msg += " " + d;
    throw EvalError(msg);
  }
  std::vector<std::string> gaps;
  for (const auto& [id, g] : gold) {
    for (std::size_t r = 0; r < k; ++r) {
      if (!graded.contains({id, r})) gaps.push_back(id + "@" + std::to_string(r));
    }
  }
  if (!gaps.empty()) {
    std::string msg = "missing (question, round) pairs:";
    for (const auto& gap : gaps) msg += " " + gap;
    throw EvalError(msg);
  }

  EvalReport report;
  report.k = k;
  report.n_questions = gold.size();
  std::vector<std::size_t> round_correct(k, 0);
  std::size_t total_correct = 0;
  for (const auto& [id, g] : gold) {
    std::size_t correct = 0;
    for (std::size_t r = 0; r < k; ++r) {
      const int rw = graded.at({id, r});
      correct += static_cast<std::size_t>(rw);
      round_correct[r] += static_cast<std::size_t>(rw);
    }
    total_correct += correct;
    report.per_question[id] = static_cast<double>(correct) / static_cast<double>(k);
  }
  const auto n = static_cast<double>(report.n_questions);
  for (std::size_t r = 0; r < k; ++r) report.per_round_accuracy.push_back(static_cast<double>(round_correct[r]) / n);
  report.mean = static_cast<double>(total_correct) / (n * static_cast<double>(k));
  double var = 0.0;
  for (double a : report.per_round_accuracy) var += (a - report.mean) * (a - report.mean);
  report.stddev = std::sqrt(var / static_cast<double>(k));
  return report;
}

/// "43.8 ± 0.8": mean and std in percent, one decimal each.
inline std::string format_mean_std(double mean, double stddev) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f ± %.1f", mean * 100.0, stddev * 100.0);
  return buf;
}

inline std::string render_report(const EvalReport& report) {
  std::string out = format_mean_std(report.mean, report.stddev);
  out += "\n";
  char buf[64];
  for (std::size_t r = 0; r < report.per_round_accuracy.size(); ++r) {
    std::snprintf(buf, sizeof buf, "round %zu: %.1f\n", r, report.per_round_accuracy[r] * 100.0);
    out += buf;
  }
  out += "questions: " + std::to_string(report.n_questions) + "\n";
  return out;
}

inline Json report_to_json(const EvalReport& report) {
  Json per_question = Json::object();
  for (const auto& [id, frac] : report.per_question) per_question[id] = frac;
  return Json{{"k", report.k},
              {"per_round_accuracy", report.per_round_accuracy},
              {"mean", report.mean},
              {"std", report.stddev},
              {"per_question", std::move(per_question)},
              {"n_questions", report.n_questions},
              {"summary", format_mean_std(report.mean, report.stddev)}};
}

// ---------------------------------------------------------------------------
// JSONL schemas

inline CompletionRecord completion_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("question_id") || !j["question_id"].is_string() || !j.contains("round") ||
      !j["round"].is_number_unsigned() || !j.contains("completion") || !j["completion"].is_string()) {
    throw FormatError("completion record needs {\"question_id\": str, \"round\": int >= 0, \"completion\": str}");
  }
  return {j["question_id"].get<std::string>(), j["round"].get<std::size_t>(), j["completion"].get<std::string>()};
}

inline Json completion_to_json(const CompletionRecord& c) {
  return Json{{"question_id", c.question_id}, {"round", c.round}, {"completion", c.completion}};
}

inline GoldRecord gold_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("question_id") || !j["question_id"].is_string() || !j.contains("gold") ||
      !j["gold"].is_string()) {
    throw FormatError("gold record needs {\"question_id\": str, \"gold\": str}");
  }
  GoldRecord g;
  g.question_id = j["question_id"].get<std::string>();
  g.gold = j["gold"].get<std::string>();
  if (j.contains("task")) {
    if (!j["task"].is_string()) throw FormatError("gold \"task\" must be a string");
    g.task = parse_task(j["task"].get<std::string>());
    if (!g.task) throw FormatError("gold \"task\" must be kk, mcq or numeric");
  }
  if (j.contains("names")) {
    if (!j["names"].is_array()) throw FormatError("gold \"names\" must be an array of strings");
    std::vector<std::string> names;
    for (const auto& n : j["names"]) {
      if (!n.is_string()) throw FormatError("gold \"names\" must be an array of strings");
      names.push_back(n.get<std::string>());
    }
    g.names = std::move(names);
  }
  return g;
}

inline Json gold_to_json(const GoldRecord& g) {
  Json j{{"question_id", g.question_id}};
  if (g.task) j["task"] = std::string(task_name(*g.task));
  j["gold"] = g.gold;
  if (g.names) j["names"] = *g.names;
  return j;
}

}  // namespace kkforge
