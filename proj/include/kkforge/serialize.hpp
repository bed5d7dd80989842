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

// JSON form of statements and puzzles.
//
//   {"iff":[{"atom":{"who":"Liam","is":"knight"}},{"atom":{"who":"Luke","is":"knave"}}]}
//   {"not":{"atom":{"who":"Matthew","is":"knight"}}}
//   {"names":["Luke",...],"statements":[...]}
//
// Atoms refer to characters by name, so a serialized puzzle carries its roster.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kkforge/logic.hpp"

namespace kkforge {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const char* connective_key(Statement::Kind k) {
  switch (k) {
    case Statement::Kind::And: return "and";
    case Statement::Kind::Or: return "or";
    case Statement::Kind::Implies: return "implies";
    case Statement::Kind::Iff: return "iff";
    default: return "";
  }
}

}  // namespace detail

inline Json statement_to_json(const Statement& s, const std::vector<std::string>& names) {
  using K = Statement::Kind;
  Json j = Json::object();
  switch (s.kind()) {
    case K::Atom:
      j["atom"] = Json{{"who", names.at(s.subject().index)}, {"is", std::string(role_word(s.claimed()))}};
      break;
    case K::Not:
      j["not"] = statement_to_json(s.operand(), names);
      break;
    default:
      j[detail::connective_key(s.kind())] =
          Json::array({statement_to_json(s.lhs(), names), statement_to_json(s.rhs(), names)});
      break;
  }
  return j;
}

inline Statement statement_from_json(const Json& j, const std::vector<std::string>& names) {
  using K = Statement::Kind;
  if (!j.is_object() || j.size() != 1) throw FormatError("statement must be an object with exactly one key");
  const auto& [key, body] = *j.items().begin();
  if (key == "atom") {
    if (!body.is_object() || !body.contains("who") || !body.contains("is") || !body["who"].is_string() ||
        !body["is"].is_string()) {
      throw FormatError("atom must be {\"who\": <name>, \"is\": \"knight\"|\"knave\"}");
    }
    const auto who = body["who"].get<std::string>();
    const auto is = body["is"].get<std::string>();
    std::size_t idx = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == who) idx = i;
    }
    if (idx == names.size()) throw FormatError("atom refers to unknown character '" + who + "'");
    if (is != "knight" && is != "knave") throw FormatError("atom role must be \"knight\" or \"knave\", got '" + is + "'");
    return Statement::atom({idx}, is == "knight" ? Role::Knight : Role::Knave);
  }
  if (key == "not") return Statement::negation(statement_from_json(body, names));

  K kind;
  if (key == "and") kind = K::And;
  else if (key == "or") kind = K::Or;
  else if (key == "implies") kind = K::Implies;
  else if (key == "iff") kind = K::Iff;
  else throw FormatError("unknown statement key '" + key + "'");
  if (!body.is_array() || body.size() != 2) throw FormatError("'" + key + "' takes an array of two statements");
  return Statement::binary(kind, statement_from_json(body[0], names), statement_from_json(body[1], names));
}

inline Json puzzle_to_json(const Puzzle& p) {
  Json statements = Json::array();
  for (const auto& s : p.statements) statements.push_back(statement_to_json(s, p.names));
  return Json{{"names", p.names}, {"statements", std::move(statements)}};
}

inline Puzzle puzzle_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("names") || !j.contains("statements")) {
    throw FormatError("puzzle must be an object with \"names\" and \"statements\"");
  }
  const auto& names = j["names"];
  const auto& statements = j["statements"];
  if (!names.is_array() || !statements.is_array()) throw FormatError("\"names\" and \"statements\" must be arrays");
  Puzzle p;
  for (const auto& n : names) {
    if (!n.is_string()) throw FormatError("character names must be strings");
    p.names.push_back(n.get<std::string>());
  }
  for (const auto& s : statements) p.statements.push_back(statement_from_json(s, p.names));
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return p;
}

}  // namespace kkforge
