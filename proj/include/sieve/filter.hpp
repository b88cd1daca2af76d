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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sieve/errors.hpp"
#include "sieve/regex_lite.hpp"

namespace sieve {

// A prefix filter is a pure predicate over strings. Trigger polarity is
// true-on-bad throughout: eval(...) == true means the prefix is rejected.
// Filters are a closed expression language, not executable code, so they are
// safe to load from documents, cheap in the decoding inner loop, and
// portable across runs.

enum class RegexTarget : std::uint8_t { kFull, kStripped };

class FilterExpr;
using FilterExprPtr = std::shared_ptr<const FilterExpr>;

struct RegexSearchExpr {
  std::string pattern;
  RegexTarget target = RegexTarget::kFull;
  bool multiline = false;
  std::shared_ptr<const regex_lite::Regex> compiled;  // built at construction
};

struct SubstrCountExpr {
  std::string needle;
  int min_count = 1;  // non-overlapping occurrences
};

struct ContainsExpr {
  std::string needle;
};

struct StrippedEmptyExpr {};

struct NotExpr {
  FilterExprPtr child;
};

struct AndExpr {
  std::vector<FilterExprPtr> children;  // >= 1
};

struct OrExpr {
  std::vector<FilterExprPtr> children;  // >= 1
};

// Immutable expression node. Build through the factories, which validate
// invariants (non-empty needles, k >= 1, >= 1 child, pattern compiles) and
// compile regexes up front so evaluation can never fail.
class FilterExpr {
 public:
  using Node = std::variant<RegexSearchExpr, SubstrCountExpr, ContainsExpr,
                            StrippedEmptyExpr, NotExpr, AndExpr, OrExpr>;

  static FilterExprPtr regex_search(std::string pattern,
                                    RegexTarget target = RegexTarget::kFull,
                                    bool multiline = false);
  static FilterExprPtr substr_count_at_least(std::string needle, int k);
  static FilterExprPtr contains(std::string needle);
  static FilterExprPtr stripped_empty();
  static FilterExprPtr negate(FilterExprPtr child);
  static FilterExprPtr all_of(std::vector<FilterExprPtr> children);
  static FilterExprPtr any_of(std::vector<FilterExprPtr> children);

  const Node& node() const { return node_; }

  // Pure function of (expr, text).
  bool eval(std::string_view text) const;

  // Structural equality (pattern text and flags, not compiled form).
  friend bool operator==(const FilterExpr& a, const FilterExpr& b);

 private:
  explicit FilterExpr(Node node) : node_(std::move(node)) {}
  Node node_;
};

enum class Provenance : std::uint8_t { kMined, kSynthesized, kHandwritten };

std::string_view to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

struct FilterStats {
  std::int64_t learn_catch_count = 0;
  double learn_mis_trigger_rate = 0.0;
};

struct FilterSpec {
  std::string id;  // unique within a FilterSet
  std::string name;
  std::string description;
  FilterExprPtr expr;
  std::string error_class;
  int round_learned = 1;  // >= 1
  Provenance provenance = Provenance::kHandwritten;
  std::optional<FilterStats> stats;
};

bool operator==(const FilterSpec& a, const FilterSpec& b);

struct FilterSetMetadata {
  std::string model_id;
  std::string domain_id;
  double epsilon = 0.01;  // in (0, 1)
  int created_rounds = 0;
};

bool operator==(const FilterSetMetadata& a, const FilterSetMetadata& b);

// Ordered collection of filters with no duplicate ids. Immutable once built
// in normal use; values are safe to share across threads.
class FilterSet {
 public:
  FilterSet() = default;
  explicit FilterSet(FilterSetMetadata metadata) : metadata_(std::move(metadata)) {}

  // Throws SchemaError on a duplicate id.
  void add(FilterSpec spec);

  const std::vector<FilterSpec>& filters() const { return filters_; }
  const FilterSetMetadata& metadata() const { return metadata_; }
  FilterSetMetadata& metadata() { return metadata_; }
  bool empty() const { return filters_.empty(); }
  std::size_t size() const { return filters_.size(); }
  const FilterSpec* find(std::string_view id) const;

  friend bool operator==(const FilterSet& a, const FilterSet& b);

 private:
  FilterSetMetadata metadata_;
  std::vector<FilterSpec> filters_;
};

// --- operations ---------------------------------------------------------------

// True when the filter triggers on (rejects) `text`.
bool eval_filter(const FilterSpec& spec, std::string_view text);

enum class Granularity : std::uint8_t { kPerCharacter, kBoundaryList };

// Length in bytes of the shortest triggering prefix of `text`, enumerating
// UTF-8 character boundaries in increasing order (the empty prefix is not a
// candidate), or nullopt when no prefix triggers. The full text counts as a
// prefix of itself.
std::optional<std::size_t> first_trigger_prefix(const FilterSpec& spec,
                                                std::string_view text);

// Same, restricted to caller-supplied byte offsets (sorted, at valid
// character boundaries).
std::optional<std::size_t> first_trigger_prefix(const FilterSpec& spec,
                                                std::string_view text,
                                                std::span<const std::size_t> boundaries);

// Ids of all filters in `set` that trigger on `text`, in set order. Empty
// means pass.
std::vector<std::string> eval_set(const FilterSet& set, std::string_view text);

// --- persistence ---------------------------------------------------------------
//
// JSON document: {"metadata": {model_id, domain_id, epsilon, created_rounds},
// "filters": [{id, name, description, error_class, round_learned, provenance,
// stats?, expr}]} where expr is a tagged node, e.g.
//   {"op": "substr_count_at_least", "needle": "C(=O)", "k": 3}
//   {"op": "regex", "pattern": "...", "target": "full", "multiline": true}
//   {"op": "and", "children": [...]}
// Unknown "op" tags are a SchemaError; nothing is skipped silently.

FilterSet parse_filter_set(std::string_view document);
std::string serialize_filter_set(const FilterSet& set);

}  // namespace sieve
