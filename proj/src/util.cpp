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

#include "sieve/util.hpp"

#include <algorithm>

namespace sieve::util {

std::string_view strip(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space_byte(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && is_space_byte(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

namespace {

int utf8_sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;  // continuation or invalid lead byte: advance one
}

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

std::size_t next_char_boundary(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return text.size();
  int len = utf8_sequence_length(static_cast<unsigned char>(text[pos]));
  std::size_t end = pos + 1;
  for (int i = 1; i < len && end < text.size() &&
                  is_continuation(static_cast<unsigned char>(text[end]));
       ++i) {
    ++end;
  }
  return std::min(end, text.size());
}

std::vector<std::size_t> char_boundaries(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    pos = next_char_boundary(text, pos);
    out.push_back(pos);
  }
  return out;
}

std::size_t char_length(std::string_view text) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    pos = next_char_boundary(text, pos);
    ++n;
  }
  return n;
}

std::size_t utf8_complete_prefix(std::string_view bytes) {
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    unsigned char lead = static_cast<unsigned char>(bytes[pos]);
    int len = utf8_sequence_length(lead);
    if (pos + static_cast<std::size_t>(len) > bytes.size()) {
      // Sequence runs past the end: complete only if the tail bytes present
      // so far already stopped being continuations (then it was invalid and
      // counts byte-by-byte).
      bool all_continuations = true;
      for (std::size_t i = pos + 1; i < bytes.size(); ++i) {
        if (!is_continuation(static_cast<unsigned char>(bytes[i]))) {
          all_continuations = false;
          break;
        }
      }
      if (len > 1 && all_continuations) return pos;  // buffer the partial char
      return bytes.size();
    }
    bool ok = true;
    for (int i = 1; i < len; ++i) {
      if (!is_continuation(static_cast<unsigned char>(bytes[pos + i]))) {
        ok = false;
        break;
      }
    }
    pos += ok ? static_cast<std::size_t>(len) : 1;
  }
  return pos;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view line = text.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (i < text.size() || !line.empty()) lines.emplace_back(line);
      start = i + 1;
    }
  }
  return lines;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t sample_index(const std::vector<double>& weights, double total,
                         std::mt19937_64& rng) {
  double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  // Rounding can push u past the accumulated sum; fall back to the last
  // positive-weight entry.
  return last_positive < weights.size() ? last_positive : weights.size() - 1;
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::vector<std::string>> csv_parse(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

}  // namespace sieve::util
