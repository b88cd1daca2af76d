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

#include "sieve/filter.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "sieve/util.hpp"

#include <json.hpp>

namespace sieve {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void invariant_violation(const std::string& what) {
  throw std::invalid_argument("filter expression: " + what);
}

}  // namespace

FilterExprPtr FilterExpr::regex_search(std::string pattern, RegexTarget target,
                                       bool multiline) {
  RegexSearchExpr e;
  e.compiled = std::make_shared<const regex_lite::Regex>(
      regex_lite::Regex::compile(pattern, multiline));
  e.pattern = std::move(pattern);
  e.target = target;
  e.multiline = multiline;
  return FilterExprPtr(new FilterExpr(Node{std::move(e)}));
}

FilterExprPtr FilterExpr::substr_count_at_least(std::string needle, int k) {
  if (needle.empty()) invariant_violation("empty needle");
  if (k < 1) invariant_violation("k must be >= 1");
  return FilterExprPtr(new FilterExpr(Node{SubstrCountExpr{std::move(needle), k}}));
}

FilterExprPtr FilterExpr::contains(std::string needle) {
  if (needle.empty()) invariant_violation("empty needle");
  return FilterExprPtr(new FilterExpr(Node{ContainsExpr{std::move(needle)}}));
}

FilterExprPtr FilterExpr::stripped_empty() {
  return FilterExprPtr(new FilterExpr(Node{StrippedEmptyExpr{}}));
}

FilterExprPtr FilterExpr::negate(FilterExprPtr child) {
  if (!child) invariant_violation("null child");
  return FilterExprPtr(new FilterExpr(Node{NotExpr{std::move(child)}}));
}

FilterExprPtr FilterExpr::all_of(std::vector<FilterExprPtr> children) {
  if (children.empty()) invariant_violation("and requires >= 1 child");
  for (const auto& c : children) {
    if (!c) invariant_violation("null child");
  }
  return FilterExprPtr(new FilterExpr(Node{AndExpr{std::move(children)}}));
}

FilterExprPtr FilterExpr::any_of(std::vector<FilterExprPtr> children) {
  if (children.empty()) invariant_violation("or requires >= 1 child");
  for (const auto& c : children) {
    if (!c) invariant_violation("null child");
  }
  return FilterExprPtr(new FilterExpr(Node{OrExpr{std::move(children)}}));
}

bool FilterExpr::eval(std::string_view text) const {
  if (const auto* re = std::get_if<RegexSearchExpr>(&node_)) {
    std::string_view target =
        re->target == RegexTarget::kStripped ? util::strip(text) : text;
    return re->compiled->search(target);
  }
  if (const auto* sc = std::get_if<SubstrCountExpr>(&node_)) {
    return util::count_occurrences(text, sc->needle) >=
           static_cast<std::size_t>(sc->min_count);
  }
  if (const auto* ct = std::get_if<ContainsExpr>(&node_)) {
    return text.find(ct->needle) != std::string_view::npos;
  }
  if (std::get_if<StrippedEmptyExpr>(&node_)) {
    return util::strip(text).empty();
  }
  if (const auto* nt = std::get_if<NotExpr>(&node_)) {
    return !nt->child->eval(text);
  }
  if (const auto* an = std::get_if<AndExpr>(&node_)) {
    return std::all_of(an->children.begin(), an->children.end(),
                       [&](const FilterExprPtr& c) { return c->eval(text); });
  }
  const auto& orx = std::get<OrExpr>(node_);
  return std::any_of(orx.children.begin(), orx.children.end(),
                     [&](const FilterExprPtr& c) { return c->eval(text); });
}

bool operator==(const FilterExpr& a, const FilterExpr& b) {
  if (a.node_.index() != b.node_.index()) return false;
  if (const auto* ra = std::get_if<RegexSearchExpr>(&a.node_)) {
    const auto& rb = std::get<RegexSearchExpr>(b.node_);
    return ra->pattern == rb.pattern && ra->target == rb.target &&
           ra->multiline == rb.multiline;
  }
  if (const auto* sa = std::get_if<SubstrCountExpr>(&a.node_)) {
    const auto& sb = std::get<SubstrCountExpr>(b.node_);
    return sa->needle == sb.needle && sa->min_count == sb.min_count;
  }
  if (const auto* ca = std::get_if<ContainsExpr>(&a.node_)) {
    return ca->needle == std::get<ContainsExpr>(b.node_).needle;
  }
  if (std::get_if<StrippedEmptyExpr>(&a.node_)) return true;
  if (const auto* na = std::get_if<NotExpr>(&a.node_)) {
    return *na->child == *std::get<NotExpr>(b.node_).child;
  }
  auto children_equal = [](const std::vector<FilterExprPtr>& xs,
                           const std::vector<FilterExprPtr>& ys) {
    if (xs.size() != ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!(*xs[i] == *ys[i])) return false;
    }
    return true;
  };
  if (const auto* aa = std::get_if<AndExpr>(&a.node_)) {
    return children_equal(aa->children, std::get<AndExpr>(b.node_).children);
  }
  return children_equal(std::get<OrExpr>(a.node_).children,
                        std::get<OrExpr>(b.node_).children);
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kMined:
      return "mined";
    case Provenance::kSynthesized:
      return "synthesized";
    case Provenance::kHandwritten:
      return "handwritten";
  }
  return "handwritten";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
  if (s == "mined") return Provenance::kMined;
  if (s == "synthesized") return Provenance::kSynthesized;
  if (s == "handwritten") return Provenance::kHandwritten;
  return std::nullopt;
}

bool operator==(const FilterSpec& a, const FilterSpec& b) {
  bool stats_equal =
      a.stats.has_value() == b.stats.has_value() &&
      (!a.stats || (a.stats->learn_catch_count == b.stats->learn_catch_count &&
                    a.stats->learn_mis_trigger_rate == b.stats->learn_mis_trigger_rate));
  return a.id == b.id && a.name == b.name && a.description == b.description &&
         a.error_class == b.error_class && a.round_learned == b.round_learned &&
         a.provenance == b.provenance && stats_equal && a.expr && b.expr &&
         *a.expr == *b.expr;
}

bool operator==(const FilterSetMetadata& a, const FilterSetMetadata& b) {
  return a.model_id == b.model_id && a.domain_id == b.domain_id &&
         a.epsilon == b.epsilon && a.created_rounds == b.created_rounds;
}

void FilterSet::add(FilterSpec spec) {
  if (find(spec.id) != nullptr) {
    throw SchemaError("filters", "duplicate filter id \"" + spec.id + "\"");
  }
  filters_.push_back(std::move(spec));
}

const FilterSpec* FilterSet::find(std::string_view id) const {
  for (const auto& f : filters_) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

bool operator==(const FilterSet& a, const FilterSet& b) {
  return a.metadata_ == b.metadata_ && a.filters_ == b.filters_;
}

bool eval_filter(const FilterSpec& spec, std::string_view text) {
  return spec.expr->eval(text);
}

std::optional<std::size_t> first_trigger_prefix(const FilterSpec& spec,
                                                std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    pos = util::next_char_boundary(text, pos);
    if (spec.expr->eval(text.substr(0, pos))) return pos;
  }
  return std::nullopt;
}

std::optional<std::size_t> first_trigger_prefix(const FilterSpec& spec,
                                                std::string_view text,
                                                std::span<const std::size_t> boundaries) {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    std::size_t b = boundaries[i];
    if (i > 0 && b < boundaries[i - 1]) {
      throw std::invalid_argument("first_trigger_prefix: boundaries not sorted");
    }
    if (b > text.size()) {
      throw std::invalid_argument("first_trigger_prefix: boundary past end of text");
    }
    if (spec.expr->eval(text.substr(0, b))) return b;
  }
  return std::nullopt;
}

std::vector<std::string> eval_set(const FilterSet& set, std::string_view text) {
  std::vector<std::string> triggered;
  for (const auto& f : set.filters()) {
    if (eval_filter(f, text)) triggered.push_back(f.id);
  }
  return triggered;
}

// --- persistence ----------------------------------------------------------------

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& message) {
  throw SchemaError(path, message);
}

const ordered_json& require_field(const ordered_json& obj, const char* key,
                                  const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "." + key, "missing field");
  return *it;
}

std::string require_string(const ordered_json& obj, const char* key,
                           const std::string& path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_string()) schema_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

FilterExprPtr parse_expr(const ordered_json& node, const std::string& path) {
  if (!node.is_object()) schema_fail(path, "expected an expression object");
  std::string op = require_string(node, "op", path);
  try {
    if (op == "regex") {
      std::string pattern = require_string(node, "pattern", path);
      RegexTarget target = RegexTarget::kFull;
      if (node.contains("target")) {
        std::string t = require_string(node, "target", path);
        if (t == "full") {
          target = RegexTarget::kFull;
        } else if (t == "stripped") {
          target = RegexTarget::kStripped;
        } else {
          schema_fail(path + ".target", "expected \"full\" or \"stripped\"");
        }
      }
      bool multiline = false;
      if (node.contains("multiline")) {
        if (!node["multiline"].is_boolean()) {
          schema_fail(path + ".multiline", "expected a boolean");
        }
        multiline = node["multiline"].get<bool>();
      }
      return FilterExpr::regex_search(std::move(pattern), target, multiline);
    }
    if (op == "substr_count_at_least") {
      std::string needle = require_string(node, "needle", path);
      const auto& kv = require_field(node, "k", path);
      if (!kv.is_number_integer()) schema_fail(path + ".k", "expected an integer");
      int k = kv.get<int>();
      if (k < 1) schema_fail(path + ".k", "k must be >= 1");
      if (needle.empty()) schema_fail(path + ".needle", "needle must be non-empty");
      return FilterExpr::substr_count_at_least(std::move(needle), k);
    }
    if (op == "contains") {
      std::string needle = require_string(node, "needle", path);
      if (needle.empty()) schema_fail(path + ".needle", "needle must be non-empty");
      return FilterExpr::contains(std::move(needle));
    }
    if (op == "stripped_empty") {
      return FilterExpr::stripped_empty();
    }
    if (op == "not") {
      return FilterExpr::negate(
          parse_expr(require_field(node, "child", path), path + ".child"));
    }
    if (op == "and" || op == "or") {
      const auto& kids = require_field(node, "children", path);
      if (!kids.is_array() || kids.empty()) {
        schema_fail(path + ".children", "expected a non-empty array");
      }
      std::vector<FilterExprPtr> children;
      children.reserve(kids.size());
      for (std::size_t i = 0; i < kids.size(); ++i) {
        children.push_back(
            parse_expr(kids[i], path + ".children[" + std::to_string(i) + "]"));
      }
      return op == "and" ? FilterExpr::all_of(std::move(children))
                         : FilterExpr::any_of(std::move(children));
    }
  } catch (const std::invalid_argument& e) {
    schema_fail(path, e.what());
  }
  schema_fail(path + ".op", "unknown op \"" + op + "\"");
}

ordered_json serialize_expr(const FilterExpr& expr) {
  ordered_json out;
  if (const auto* re = std::get_if<RegexSearchExpr>(&expr.node())) {
    out["op"] = "regex";
    out["pattern"] = re->pattern;
    out["target"] = re->target == RegexTarget::kStripped ? "stripped" : "full";
    out["multiline"] = re->multiline;
  } else if (const auto* sc = std::get_if<SubstrCountExpr>(&expr.node())) {
    out["op"] = "substr_count_at_least";
    out["needle"] = sc->needle;
    out["k"] = sc->min_count;
  } else if (const auto* ct = std::get_if<ContainsExpr>(&expr.node())) {
    out["op"] = "contains";
    out["needle"] = ct->needle;
  } else if (std::get_if<StrippedEmptyExpr>(&expr.node())) {
    out["op"] = "stripped_empty";
  } else if (const auto* nt = std::get_if<NotExpr>(&expr.node())) {
    out["op"] = "not";
    out["child"] = serialize_expr(*nt->child);
  } else if (const auto* an = std::get_if<AndExpr>(&expr.node())) {
    out["op"] = "and";
    out["children"] = ordered_json::array();
    for (const auto& c : an->children) out["children"].push_back(serialize_expr(*c));
  } else {
    const auto& orx = std::get<OrExpr>(expr.node());
    out["op"] = "or";
    out["children"] = ordered_json::array();
    for (const auto& c : orx.children) out["children"].push_back(serialize_expr(*c));
  }
  return out;
}

}  // namespace

FilterSet parse_filter_set(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    schema_fail("$", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_fail("$", "expected a JSON object");

  const auto& meta = require_field(doc, "metadata", "$");
  if (!meta.is_object()) schema_fail("$.metadata", "expected an object");
  FilterSetMetadata metadata;
  metadata.model_id = require_string(meta, "model_id", "$.metadata");
  metadata.domain_id = require_string(meta, "domain_id", "$.metadata");
  const auto& eps = require_field(meta, "epsilon", "$.metadata");
  if (!eps.is_number()) schema_fail("$.metadata.epsilon", "expected a number");
  metadata.epsilon = eps.get<double>();
  if (!(metadata.epsilon > 0.0 && metadata.epsilon < 1.0)) {
    schema_fail("$.metadata.epsilon", "epsilon must lie in (0, 1)");
  }
  const auto& rounds = require_field(meta, "created_rounds", "$.metadata");
  if (!rounds.is_number_integer()) {
    schema_fail("$.metadata.created_rounds", "expected an integer");
  }
  metadata.created_rounds = rounds.get<int>();

  FilterSet set(metadata);
  const auto& filters = require_field(doc, "filters", "$");
  if (!filters.is_array()) schema_fail("$.filters", "expected an array");
  for (std::size_t i = 0; i < filters.size(); ++i) {
    const std::string path = "$.filters[" + std::to_string(i) + "]";
    const auto& f = filters[i];
    if (!f.is_object()) schema_fail(path, "expected an object");
    FilterSpec spec;
    spec.id = require_string(f, "id", path);
    if (spec.id.empty()) schema_fail(path + ".id", "id must be non-empty");
    spec.name = require_string(f, "name", path);
    spec.description = require_string(f, "description", path);
    spec.error_class = require_string(f, "error_class", path);
    const auto& round = require_field(f, "round_learned", path);
    if (!round.is_number_integer()) {
      schema_fail(path + ".round_learned", "expected an integer");
    }
    spec.round_learned = round.get<int>();
    if (spec.round_learned < 1) {
      schema_fail(path + ".round_learned", "round_learned must be >= 1");
    }
    std::string prov = require_string(f, "provenance", path);
    auto parsed = provenance_from_string(prov);
    if (!parsed) {
      schema_fail(path + ".provenance",
                  "expected \"mined\", \"synthesized\", or \"handwritten\"");
    }
    spec.provenance = *parsed;
    if (f.contains("stats") && !f["stats"].is_null()) {
      const auto& st = f["stats"];
      if (!st.is_object()) schema_fail(path + ".stats", "expected an object");
      FilterStats stats;
      const auto& catches = require_field(st, "learn_catch_count", path + ".stats");
      if (!catches.is_number_integer()) {
        schema_fail(path + ".stats.learn_catch_count", "expected an integer");
      }
      stats.learn_catch_count = catches.get<std::int64_t>();
      const auto& rate = require_field(st, "learn_mis_trigger_rate", path + ".stats");
      if (!rate.is_number()) {
        schema_fail(path + ".stats.learn_mis_trigger_rate", "expected a number");
      }
      stats.learn_mis_trigger_rate = rate.get<double>();
      spec.stats = stats;
    }
    spec.expr = parse_expr(require_field(f, "expr", path), path + ".expr");
    try {
      set.add(std::move(spec));
    } catch (const SchemaError&) {
      schema_fail(path + ".id", "duplicate filter id");
    }
  }
  return set;
}

std::string serialize_filter_set(const FilterSet& set) {
  ordered_json doc;
  doc["metadata"] = {{"model_id", set.metadata().model_id},
                     {"domain_id", set.metadata().domain_id},
                     {"epsilon", set.metadata().epsilon},
                     {"created_rounds", set.metadata().created_rounds}};
  doc["filters"] = ordered_json::array();
  for (const auto& f : set.filters()) {
    ordered_json jf;
    jf["id"] = f.id;
    jf["name"] = f.name;
    jf["description"] = f.description;
    jf["error_class"] = f.error_class;
    jf["round_learned"] = f.round_learned;
    jf["provenance"] = std::string(to_string(f.provenance));
    if (f.stats) {
      jf["stats"] = {{"learn_catch_count", f.stats->learn_catch_count},
                     {"learn_mis_trigger_rate", f.stats->learn_mis_trigger_rate}};
    }
    jf["expr"] = serialize_expr(*f.expr);
    doc["filters"].push_back(std::move(jf));
  }
  return doc.dump(2) + "\n";
}

}  // namespace sieve
