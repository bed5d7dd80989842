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

// Exhaustive solver: tries all 2^n role assignments.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kkforge/logic.hpp"

namespace kkforge {

/// Enumeration is refused above this roster size.
inline constexpr std::size_t kMaxSolverCharacters = 24;

struct SolveReport {
  /// Consistent assignments, ascending by Assignment::mask().
  std::vector<Assignment> solutions;
  std::uint64_t assignments_checked = 0;
};

inline SolveReport solve_all(const Puzzle& puzzle) {
  puzzle.validate();
  const std::size_t n = puzzle.size();
  if (n > kMaxSolverCharacters) {
    throw std::invalid_argument("solve_all: " + std::to_string(n) + " characters exceeds the enumeration cap of " +
                                std::to_string(kMaxSolverCharacters));
  }
  SolveReport report;
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    auto asg = Assignment::from_mask(mask, n);
    if (is_consistent(puzzle, asg)) report.solutions.push_back(std::move(asg));
  }
  report.assignments_checked = limit;
  return report;
}

class NoSolution : public std::runtime_error {
 public:
  NoSolution() : std::runtime_error("puzzle has no consistent assignment") {}
};

class Ambiguous : public std::runtime_error {
 public:
  explicit Ambiguous(std::size_t count)
      : std::runtime_error("puzzle has " + std::to_string(count) + " consistent assignments"), count_(count) {}
  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

/// The single consistent assignment; throws NoSolution or Ambiguous otherwise.
inline Assignment solve_unique(const Puzzle& puzzle) {
  auto report = solve_all(puzzle);
  if (report.solutions.empty()) throw NoSolution();
  if (report.solutions.size() > 1) throw Ambiguous(report.solutions.size());
  return std::move(report.solutions.front());
}

}  // namespace kkforge
