// Copyright 2026 The Sieve Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bitset>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sieve/errors.hpp"

namespace sieve::regex_lite {

// A deliberately small regular-expression dialect compiled to a Thompson NFA
// and simulated breadth-first, so matching is O(len(text) * len(pattern))
// with no backtracking.
//
// Supported: literals, escapes (\n \t \r \f \v \xHH and identity escapes for
// punctuation), character classes [...] with ranges and negation, the class
// shorthands \d \D \w \W \s \S, '.', anchors ^ $ (multiline-aware), word
// boundaries \b \B, alternation '|', groups (...) and (?:...), and the
// quantifiers * + ? {m} {m,} {m,n} with an optional lazy '?' suffix (laziness
// is irrelevant for boolean search and is accepted but ignored).
//
// Rejected at compile time with PatternUnsupportedError: backreferences,
// lookaround, named groups, inline flags, POSIX class names, and repetition
// bounds above kMaxRepetition.
//
// Matching is byte-based; multi-byte UTF-8 literals in the pattern match as
// their byte sequences. '.' matches any byte except '\n'.
class Regex {
 public:
  static constexpr int kMaxRepetition = 1000;

  // Throws PatternUnsupportedError for anything outside the dialect.
  static Regex compile(std::string_view pattern, bool multiline = false);

  // True if the pattern matches anywhere in `text` (re.search semantics).
  bool search(std::string_view text) const;

  const std::string& pattern() const { return pattern_; }
  bool multiline() const { return multiline_; }

 private:
  enum class Op : std::uint8_t { kByte, kSplit, kJmp, kAssert, kMatch };
  enum class Assert : std::uint8_t {
    kLineStart,
    kLineEnd,
    kWordBoundary,
    kNotWordBoundary,
  };
  struct Inst {
    Op op;
    std::uint32_t a = 0;  // primary target (kSplit/kJmp); unused otherwise
    std::uint32_t b = 0;  // secondary target for kSplit
    std::uint16_t cls = 0;
    Assert assert_kind = Assert::kLineStart;
  };

  Regex() = default;

  bool assertion_holds(Assert kind, std::string_view text, std::size_t pos) const;
  void add_thread(std::uint32_t pc, std::string_view text, std::size_t pos,
                  std::vector<std::uint32_t>& list, std::vector<std::uint32_t>& seen,
                  std::uint32_t stamp, bool& matched) const;

  std::string pattern_;
  bool multiline_ = false;
  std::vector<Inst> program_;
  std::vector<std::bitset<256>> classes_;

  friend class Compiler;
};

}  // namespace sieve::regex_lite
