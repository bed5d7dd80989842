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

// Knights & Knaves domain types and their semantics.
//
// A knight's statement is always true and a knave's is always false, so an
// assignment of roles is consistent with a puzzle exactly when every speaker's
// statement evaluates to "speaker is a knight".

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kkforge {

enum class Role : std::uint8_t { Knave = 0, Knight = 1 };

inline constexpr std::string_view role_word(Role r) {
  return r == Role::Knight ? "knight" : "knave";
}

inline constexpr Role opposite(Role r) {
  return r == Role::Knight ? Role::Knave : Role::Knight;
}

/// Index into a puzzle roster.
struct CharacterId {
  std::size_t index = 0;
  friend bool operator==(CharacterId, CharacterId) = default;
};

/// Statement AST. Leaves are atoms "subject is a <role>"; interior nodes are
/// boolean connectives. Held by value; copies are deep.
class Statement {
 public:
  enum class Kind : std::uint8_t { Atom, Not, And, Or, Implies, Iff };

  static Statement atom(CharacterId subject, Role claimed) {
    Statement s(Kind::Atom);
    s.subject_ = subject;
    s.claimed_ = claimed;
    return s;
  }
  static Statement negation(Statement inner) {
    Statement s(Kind::Not);
    s.children_.push_back(std::move(inner));
    return s;
  }
  static Statement binary(Kind kind, Statement lhs, Statement rhs) {
    if (kind == Kind::Atom || kind == Kind::Not) {
      throw std::invalid_argument("Statement::binary: kind is not a binary connective");
    }
    Statement s(kind);
    s.children_.reserve(2);
    s.children_.push_back(std::move(lhs));
    s.children_.push_back(std::move(rhs));
    return s;
  }
  static Statement conj(Statement a, Statement b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static Statement disj(Statement a, Statement b) { return binary(Kind::Or, std::move(a), std::move(b)); }
  static Statement implies(Statement a, Statement b) { return binary(Kind::Implies, std::move(a), std::move(b)); }
  static Statement iff(Statement a, Statement b) { return binary(Kind::Iff, std::move(a), std::move(b)); }

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::Atom; }

  // Atom accessors; only meaningful when is_atom().
  CharacterId subject() const { return subject_; }
  Role claimed() const { return claimed_; }

  const Statement& operand() const { return children_.at(0); }
  const Statement& lhs() const { return children_.at(0); }
  const Statement& rhs() const { return children_.at(1); }

  /// Atoms have depth 0; every connective adds one level.
  int depth() const {
    int d = 0;
    for (const auto& c : children_) d = std::max(d, c.depth() + 1);
    return d;
  }

  /// Largest CharacterId index referenced anywhere in the tree.
  std::size_t max_subject() const {
    if (is_atom()) return subject_.index;
    std::size_t m = 0;
    for (const auto& c : children_) m = std::max(m, c.max_subject());
    return m;
  }

  friend bool operator==(const Statement& a, const Statement& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.is_atom()) return a.subject_ == b.subject_ && a.claimed_ == b.claimed_;
    return a.children_ == b.children_;
  }

 private:
  explicit Statement(Kind k) : kind_(k) {}

  Kind kind_;
  CharacterId subject_{};
  Role claimed_ = Role::Knight;
  std::vector<Statement> children_;
};

/// One role per roster member, index-aligned with the roster.
struct Assignment {
  std::vector<Role> roles;

  Assignment() = default;
  explicit Assignment(std::vector<Role> r) : roles(std::move(r)) {}
  Assignment(std::initializer_list<Role> r) : roles(r) {}

  /// Bit i set iff character i is a knight.
  static Assignment from_mask(std::uint32_t mask, std::size_t n) {
    Assignment a;
    a.roles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      a.roles.push_back(((mask >> i) & 1u) ? Role::Knight : Role::Knave);
    }
    return a;
  }
  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < roles.size(); ++i) {
      if (roles[i] == Role::Knight) m |= (1u << i);
    }
    return m;
  }

  std::size_t size() const { return roles.size(); }
  Role operator[](CharacterId id) const { return roles.at(id.index); }
  Role operator[](std::size_t i) const { return roles.at(i); }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Roster of distinct names plus one statement per speaker, index-aligned.
struct Puzzle {
  std::vector<std::string> names;
  std::vector<Statement> statements;

  std::size_t size() const { return names.size(); }

  /// Throws std::invalid_argument unless the puzzle is well formed.
  void validate() const {
    if (names.empty()) throw std::invalid_argument("puzzle: roster is empty");
    if (statements.size() != names.size()) {
      throw std::invalid_argument("puzzle: statement count does not match roster size");
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw std::invalid_argument("puzzle: empty character name");
      for (std::size_t j = 0; j < i; ++j) {
        if (names[i] == names[j]) throw std::invalid_argument("puzzle: duplicate name '" + names[i] + "'");
      }
    }
    for (const auto& s : statements) {
      if (s.max_subject() >= names.size()) {
        throw std::invalid_argument("puzzle: statement references a character outside the roster");
      }
    }
  }

  friend bool operator==(const Puzzle&, const Puzzle&) = default;
};

// ---------------------------------------------------------------------------
// Semantics

/// Truth value of `stmt` under `asg`. Throws std::out_of_range on an atom whose
/// subject is not covered by the assignment.
inline bool evaluate(const Statement& stmt, const Assignment& asg) {
  using K = Statement::Kind;
  switch (stmt.kind()) {
    case K::Atom:
      return asg[stmt.subject()] == stmt.claimed();
    case K::Not:
      return !evaluate(stmt.operand(), asg);
    case K::And:
      return evaluate(stmt.lhs(), asg) && evaluate(stmt.rhs(), asg);
    case K::Or:
      return evaluate(stmt.lhs(), asg) || evaluate(stmt.rhs(), asg);
    case K::Implies:
      return !evaluate(stmt.lhs(), asg) || evaluate(stmt.rhs(), asg);
    case K::Iff:
      return evaluate(stmt.lhs(), asg) == evaluate(stmt.rhs(), asg);
  }
  return false;
}

inline bool is_consistent(const Puzzle& puzzle, const Assignment& asg) {
  if (asg.size() != puzzle.size()) {
    throw std::invalid_argument("is_consistent: assignment does not cover the roster");
  }
  for (std::size_t i = 0; i < puzzle.size(); ++i) {
    if (evaluate(puzzle.statements[i], asg) != (asg[i] == Role::Knight)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// English rendering

namespace detail {

inline void render_into(std::string& out, const Statement& s,
                        const std::vector<std::string>& names, bool sentence_start) {
  using K = Statement::Kind;
  auto open = [&](std::string_view capitalised, std::string_view lower) {
    out += sentence_start ? capitalised : lower;
  };
  switch (s.kind()) {
    case K::Atom:
      out += names.at(s.subject().index);
      out += " is a ";
      out += role_word(s.claimed());
      return;
    case K::Not:
      if (s.operand().is_atom()) {
        out += names.at(s.operand().subject().index);
        out += " is not a ";
        out += role_word(s.operand().claimed());
      } else {
        open("It is not the case that ", "it is not the case that ");
        render_into(out, s.operand(), names, false);
      }
      return;
    case K::And:
    case K::Or:
    case K::Iff:
      render_into(out, s.lhs(), names, sentence_start);
      out += s.kind() == K::And ? " and " : s.kind() == K::Or ? " or " : " if and only if ";
      render_into(out, s.rhs(), names, false);
      return;
    case K::Implies:
      open("If ", "if ");
      render_into(out, s.lhs(), names, false);
      out += " then ";
      render_into(out, s.rhs(), names, false);
      return;
  }
}

}  // namespace detail

/// English surface form without terminal punctuation, e.g. "Liam is a knight
/// if and only if Luke is a knave". Connective operands are rendered without
/// parentheses.
inline std::string render_statement(const Statement& stmt, const std::vector<std::string>& names) {
  std::string out;
  detail::render_into(out, stmt, names, true);
  return out;
}

// ---------------------------------------------------------------------------
// Solution strings

/// Canonical answer: "N1 is a <role>; N2 is a <role>; ..." in roster order.
inline std::string format_solution(const Assignment& asg, const std::vector<std::string>& names) {
  if (asg.size() != names.size()) {
    throw std::invalid_argument("format_solution: assignment does not cover the roster");
  }
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += "; ";
    out += names[i];
    out += " is a ";
    out += role_word(asg[i]);
  }
  return out;
}

/// Why a solution string was rejected.
class SolutionParseError : public std::runtime_error {
 public:
  enum class Kind { MissingCharacter, UnknownName, ConflictingRole, Unparseable };

  SolutionParseError(Kind kind, std::string subject, const std::string& what)
      : std::runtime_error(what), kind_(kind), subject_(std::move(subject)) {}

  Kind kind() const { return kind_; }
  /// The offending name or token; empty for Unparseable.
  const std::string& subject() const { return subject_; }

 private:
  Kind kind_;
  std::string subject_;
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
}

inline std::string_view trim(std::string_view s, std::string_view junk = " \t\r\n") {
  const auto b = s.find_first_not_of(junk);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(junk);
  return s.substr(b, e - b + 1);
}

// Splits on ';', ',', newlines, sentence ends and the standalone word "and".
inline std::vector<std::string> split_clauses(std::string_view lowered) {
  std::vector<std::string> clauses;
  std::string cur;
  auto flush = [&] {
    clauses.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    const char c = lowered[i];
    if (c == ';' || c == ',' || c == '\n') {
      flush();
      continue;
    }
    // Sentence ends.
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == lowered.size() || std::isspace(static_cast<unsigned char>(lowered[i + 1])))) {
      flush();
      continue;
    }
    if (c == 'a' && lowered.substr(i, 3) == "and" && (i == 0 || !is_word_char(lowered[i - 1])) &&
        (i + 3 == lowered.size() || !is_word_char(lowered[i + 3]))) {
      flush();
      i += 2;
      continue;
    }
    cur += c;
  }
  flush();
  return clauses;
}

}  // namespace detail

/// Parses clauses of the form "X is a knight" / "X is a knave". Clauses may be
/// separated by ';', ',', "and", newlines or sentence ends, in any order,
/// with any letter case. Fragments that are not of that form are ignored. When the subject of
/// a clause carries leading filler ("so luke is a knave") it is matched to the
/// longest roster name it ends with.
inline Assignment parse_solution(std::string_view text, const std::vector<std::string>& names) {
  using E = SolutionParseError;
  std::vector<std::string> lowered_names;
  lowered_names.reserve(names.size());
  for (const auto& n : names) lowered_names.push_back(detail::lower(n));

  std::vector<std::optional<Role>> roles(names.size());
  bool any_clause = false;

  for (const auto& raw : detail::split_clauses(detail::lower(text))) {
    std::string_view clause = detail::trim(raw, " \t\r\n.!*\"'`:()[]{}");
    // "<subject> is a <role>", with the role as the final word.
    std::optional<Role> role;
    std::string_view head;
    for (const auto& [suffix, r] : {std::pair<std::string_view, Role>{" is a knight", Role::Knight},
                                    {" is a knave", Role::Knave}}) {
      if (clause.size() > suffix.size() && clause.ends_with(suffix)) {
        role = r;
        head = detail::trim(clause.substr(0, clause.size() - suffix.size()));
        break;
      }
    }
    if (!role || head.empty()) continue;
    any_clause = true;

    std::optional<std::size_t> who;
    for (std::size_t i = 0; i < lowered_names.size(); ++i) {
      const auto& n = lowered_names[i];
      if (head == n) {
        who = i;
        break;
      }
      if (head.size() > n.size() && head.ends_with(n) &&
          !detail::is_word_char(head[head.size() - n.size() - 1])) {
        if (!who || lowered_names[*who].size() < n.size()) who = i;
      }
    }
    if (!who) {
      throw E(E::Kind::UnknownName, std::string(head), "unknown character name '" + std::string(head) + "'");
    }
    if (roles[*who] && *roles[*who] != *role) {
      throw E(E::Kind::ConflictingRole, names[*who], names[*who] + " is assigned both roles");
    }
    roles[*who] = role;
  }

  if (!any_clause) throw E(E::Kind::Unparseable, "", "no 'X is a knight/knave' clause found");
  Assignment asg;
  asg.roles.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!roles[i]) throw E(E::Kind::MissingCharacter, names[i], names[i] + " is never assigned a role");
    asg.roles.push_back(*roles[i]);
  }
  return asg;
}

}  // namespace kkforge
