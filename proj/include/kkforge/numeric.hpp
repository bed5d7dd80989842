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

// Bounded value grammar for numeric answers.
//
//   value    := shell* signed percent?
//   shell    := "$" value "$" | "$$" value "$$" | "\(" value "\)" | "\[" value "\]" | "\boxed{" value "}"
//   signed   := ("+" | "-")? (frac | ratio | decimal)
//   frac     := ("\frac" | "\dfrac" | "\tfrac") "{" sdecimal "}" "{" sdecimal "}"
//   ratio    := decimal "/" decimal
//   decimal  := digits ("." digits?)? | "." digits
//   percent  := "%" | "\%"
//
// Values are exact rationals while numerator and denominator fit in 64 bits;
// beyond that they degrade to doubles. Anything else is outside the grammar and
// graded by normalized string comparison. Symbolic equivalence ("x+1" vs
// "1+x") is not attempted.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace kkforge {

struct NumericValue {
  bool exact = true;
  // Valid when exact: den > 0 and gcd(|num|, den) == 1.
  std::int64_t num = 0;
  std::int64_t den = 1;
  double approx = 0.0;
};

namespace detail {

inline std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Index one past the '}' closing the '{' at `open`, or npos.
inline std::size_t match_brace(std::string_view s, std::size_t open) {
  int level = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '{') ++level;
    else if (s[i] == '}' && --level == 0) return i + 1;
  }
  return std::string_view::npos;
}

inline bool strip_shell(std::string_view& s) {
  auto wrapped = [&](std::string_view open, std::string_view close) {
    if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close)) {
      s = trim_ws(s.substr(open.size(), s.size() - open.size() - close.size()));
      return true;
    }
    return false;
  };
  if (wrapped("$$", "$$") || wrapped("$", "$") || wrapped("\\(", "\\)") || wrapped("\\[", "\\]")) return true;
  static constexpr std::string_view kBoxed = "\\boxed{";
  if (s.starts_with(kBoxed) && match_brace(s, kBoxed.size() - 1) == s.size()) {
    s = trim_ws(s.substr(kBoxed.size(), s.size() - kBoxed.size() - 1));
    return true;
  }
  return false;
}

struct Ratio {
  bool exact = true;
  __int128 num = 0;
  __int128 den = 1;
  double approx = 0.0;
};

inline __int128 gcd128(__int128 a, __int128 b) {
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Ratio make_ratio(__int128 num, __int128 den, double approx) {
  Ratio r;
  r.approx = approx;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 kMax = INT64_MAX;
  r.exact = num <= kMax && -num <= kMax && den <= kMax;
  r.num = num;
  r.den = den;
  return r;
}

// Unsigned decimal; rejects anything that is not entirely the production.
inline std::optional<Ratio> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  __int128 num = 0;
  __int128 den = 1;
  bool digits = false;
  bool dot = false;
  bool overflow = false;
  constexpr __int128 kLimit = static_cast<__int128>(1) << 100;
  for (char c : s) {
    if (c == '.') {
      if (dot) return std::nullopt;
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    digits = true;
    if (num < kLimit && den < kLimit) {
      num = num * 10 + (c - '0');
      if (dot) den *= 10;
    } else {
      overflow = true;
    }
  }
  if (!digits) return std::nullopt;
  const std::string text(s);
  auto r = make_ratio(num, den, std::strtod(text.c_str(), nullptr));
  if (overflow) r.exact = false;
  return r;
}

inline std::optional<Ratio> parse_signed_decimal(std::string_view s) {
  s = trim_ws(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s = trim_ws(s.substr(1));
  }
  auto r = parse_decimal(s);
  if (r && negative) {
    r->num = -r->num;
    r->approx = -r->approx;
  }
  return r;
}

inline std::optional<Ratio> divide(const Ratio& a, const Ratio& b) {
  if (b.num == 0) return std::nullopt;
  Ratio r;
  if (a.exact && b.exact) {
    r = make_ratio(a.num * b.den, a.den * b.num, a.approx / b.approx);
  } else {
    r.exact = false;
  }
  r.approx = a.approx / b.approx;
  return r;
}

}  // namespace detail

/// Parses `text` under the value grammar; nullopt when it does not belong.
inline std::optional<NumericValue> parse_numeric(std::string_view text) {
  using namespace detail;
  std::string_view s = trim_ws(text);
  while (strip_shell(s)) {
  }

  bool percent = false;
  if (s.ends_with("\\%")) {
    percent = true;
    s = trim_ws(s.substr(0, s.size() - 2));
  } else if (s.ends_with("%")) {
    percent = true;
    s = trim_ws(s.substr(0, s.size() - 1));
  }

  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s = trim_ws(s.substr(1));
  }

  std::optional<Ratio> value;
  std::string_view frac_body;
  for (std::string_view cmd : {"\\frac", "\\dfrac", "\\tfrac"}) {
    if (s.starts_with(cmd) && s.size() > cmd.size() && s[cmd.size()] == '{') {
      frac_body = s.substr(cmd.size());
      break;
    }
  }
  if (!frac_body.empty()) {
    const auto end1 = match_brace(frac_body, 0);
    if (end1 == std::string_view::npos || end1 >= frac_body.size() || frac_body[end1] != '{') return std::nullopt;
    const auto end2 = match_brace(frac_body, end1);
    if (end2 != frac_body.size()) return std::nullopt;
    const auto a = parse_signed_decimal(frac_body.substr(1, end1 - 2));
    const auto b = parse_signed_decimal(frac_body.substr(end1 + 1, end2 - end1 - 2));
    if (!a || !b) return std::nullopt;
    value = divide(*a, *b);
  } else if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto a = parse_decimal(trim_ws(s.substr(0, slash)));
    const auto b = parse_decimal(trim_ws(s.substr(slash + 1)));
    if (!a || !b) return std::nullopt;
    value = divide(*a, *b);
  } else {
    value = parse_decimal(s);
  }
  if (!value) return std::nullopt;

  if (negative) {
    value->num = -value->num;
    value->approx = -value->approx;
  }
  if (percent) {
    if (value->exact) {
      *value = make_ratio(value->num, value->den * 100, value->approx / 100.0);
    } else {
      value->approx /= 100.0;
    }
  }

  NumericValue out;
  out.exact = value->exact;
  out.approx = value->approx;
  if (out.exact) {
    out.num = static_cast<std::int64_t>(value->num);
    out.den = static_cast<std::int64_t>(value->den);
    out.approx = static_cast<double>(out.num) / static_cast<double>(out.den);
  }
  return out;
}

inline constexpr double kNumericRelativeTolerance = 1e-9;

/// Exact comparison when both sides are exact, else relative tolerance 1e-9.
inline bool numeric_equal(const NumericValue& a, const NumericValue& b) {
  if (a.exact && b.exact) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  const double scale = std::max(std::fabs(a.approx), std::fabs(b.approx));
  return std::fabs(a.approx - b.approx) <= kNumericRelativeTolerance * scale;
}

/// String used when a side falls outside the grammar: whitespace and '$'
/// removed, trailing fractional zeros dropped ("1.50" -> "1.5", "2.0" -> "2").
inline std::string normalize_answer_string(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '$') s += c;
  }
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      out += s[i++];
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    out.append(s, i, j - i);
    if (j < s.size() && s[j] == '.' && j + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
      std::size_t k = j + 1;
      while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
      std::string frac = s.substr(j + 1, k - j - 1);
      while (!frac.empty() && frac.back() == '0') frac.pop_back();
      if (!frac.empty()) out += "." + frac;
      j = k;
    }
    i = j;
  }
  return out;
}

/// Grammar comparison when both parse, else normalized string equality.
inline bool answers_equivalent(std::string_view a, std::string_view b) {
  const auto va = parse_numeric(a);
  const auto vb = parse_numeric(b);
  if (va && vb) return numeric_equal(*va, *vb);
  return normalize_answer_string(a) == normalize_answer_string(b);
}

}  // namespace kkforge
