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

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace sieve::util {

// --- text helpers -----------------------------------------------------------

inline bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view strip(std::string_view text);

// Non-overlapping occurrence count, Python str.count semantics.
std::size_t count_occurrences(std::string_view text, std::string_view needle);

// Byte offset of the next UTF-8 character boundary strictly after `pos`.
// Invalid lead bytes and truncated sequences advance one byte.
std::size_t next_char_boundary(std::string_view text, std::size_t pos);

// All character boundaries of `text` in increasing order, excluding 0 and
// including text.size() (empty for empty text).
std::vector<std::size_t> char_boundaries(std::string_view text);

std::size_t char_length(std::string_view text);

// Longest prefix of `bytes` that is valid UTF-8 (a cut never lands inside a
// multi-byte sequence). Bytes that cannot start a valid sequence count as
// complete single-byte characters so that binary-ish text still advances.
std::size_t utf8_complete_prefix(std::string_view bytes);

std::vector<std::string> split_lines(std::string_view text);

// --- deterministic RNG helpers ---------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);

// Stable per-task seed derivation; avoids correlated streams across indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index drawn proportionally to non-negative `weights` (sum = `total` > 0).
std::size_t sample_index(const std::vector<double>& weights, double total,
                         std::mt19937_64& rng);

// --- small csv helpers (RFC 4180 quoting) -----------------------------------

std::string csv_escape(std::string_view field);

// Parses one CSV document into rows of fields. Handles quoted fields with
// embedded commas, quotes, and newlines.
std::vector<std::vector<std::string>> csv_parse(std::string_view text);

}  // namespace sieve::util
