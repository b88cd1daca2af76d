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

#include "sieve/regex_lite.hpp"

#include <cctype>
#include <optional>
#include <variant>

namespace sieve::regex_lite {

namespace {

// Caps both compile-time blowup from counted repetition and the recursion
// depth of the thread-add walk (which follows split chains).
constexpr std::size_t kMaxProgramSize = 50000;
constexpr int kMaxGroupDepth = 256;

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_';
}

std::bitset<256> class_digits() {
  std::bitset<256> s;
  for (int c = '0'; c <= '9'; ++c) s.set(c);
  return s;
}

std::bitset<256> class_word() {
  std::bitset<256> s = class_digits();
  for (int c = 'a'; c <= 'z'; ++c) s.set(c);
  for (int c = 'A'; c <= 'Z'; ++c) s.set(c);
  s.set('_');
  return s;
}

std::bitset<256> class_space() {
  std::bitset<256> s;
  for (unsigned char c : {' ', '\t', '\n', '\r', '\f', '\v'}) s.set(c);
  return s;
}

// --- AST --------------------------------------------------------------------

struct Node;
using NodePtr = std::unique_ptr<Node>;

struct ByteClassNode {
  std::bitset<256> cls;
};
struct ConcatNode {
  std::vector<NodePtr> parts;
};
struct AltNode {
  std::vector<NodePtr> options;
};
struct RepeatNode {
  NodePtr child;
  int min = 0;
  int max = -1;  // -1 = unbounded
};
struct AssertNode {
  int kind;  // maps onto Regex::Assert
};

struct Node {
  std::variant<ByteClassNode, ConcatNode, AltNode, RepeatNode, AssertNode> v;
};

NodePtr make_class(std::bitset<256> cls) {
  return std::make_unique<Node>(Node{ByteClassNode{std::move(cls)}});
}

NodePtr make_literal(unsigned char byte) {
  std::bitset<256> cls;
  cls.set(byte);
  return make_class(cls);
}

// --- parser -----------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view pattern) : p_(pattern) {}

  NodePtr parse() {
    NodePtr node = parse_alternation();
    if (!at_end()) fail("unbalanced ')'");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw PatternUnsupportedError("regex: " + why + " at offset " +
                                  std::to_string(pos_) + " in pattern \"" +
                                  std::string(p_) + "\"");
  }

  bool at_end() const { return pos_ >= p_.size(); }
  char peek() const { return p_[pos_]; }
  char take() { return p_[pos_++]; }
  bool consume(char c) {
    if (!at_end() && p_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_alternation() {
    std::vector<NodePtr> options;
    options.push_back(parse_concat());
    while (!at_end() && peek() == '|') {
      take();
      options.push_back(parse_concat());
    }
    if (options.size() == 1) return std::move(options.front());
    return std::make_unique<Node>(Node{AltNode{std::move(options)}});
  }

  NodePtr parse_concat() {
    std::vector<NodePtr> parts;
    while (!at_end() && peek() != '|' && peek() != ')') {
      parts.push_back(parse_repeat());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return std::make_unique<Node>(Node{ConcatNode{std::move(parts)}});
  }

  NodePtr parse_repeat() {
    NodePtr atom = parse_atom();
    std::optional<std::pair<int, int>> bounds = parse_quantifier();
    if (!bounds) return atom;
    if (std::holds_alternative<AssertNode>(atom->v)) {
      fail("quantifier applied to an anchor");
    }
    // A directly following quantifier ('a**') has nothing to repeat.
    if (!at_end() && (peek() == '*' || peek() == '+')) fail("stacked quantifier");
    auto node = std::make_unique<Node>(
        Node{RepeatNode{std::move(atom), bounds->first, bounds->second}});
    return node;
  }

  std::optional<std::pair<int, int>> parse_quantifier() {
    if (at_end()) return std::nullopt;
    std::optional<std::pair<int, int>> bounds;
    switch (peek()) {
      case '*':
        take();
        bounds = {0, -1};
        break;
      case '+':
        take();
        bounds = {1, -1};
        break;
      case '?':
        take();
        bounds = {0, 1};
        break;
      case '{': {
        bounds = parse_braced_bounds();
        if (!bounds) return std::nullopt;  // literal '{', already handled
        break;
      }
      default:
        return std::nullopt;
    }
    consume('?');  // lazy marker: acceptance-equivalent, ignored
    return bounds;
  }

  // Returns nullopt (without consuming) when the braces do not form a valid
  // quantifier; the '{' is then treated as a literal by parse_atom.
  std::optional<std::pair<int, int>> parse_braced_bounds() {
    std::size_t save = pos_;
    take();  // '{'
    auto digits = [&]() -> std::optional<int> {
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) return std::nullopt;
      long value = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        value = value * 10 + (take() - '0');
        if (value > Regex::kMaxRepetition) {
          fail("repetition bound above " + std::to_string(Regex::kMaxRepetition));
        }
      }
      return static_cast<int>(value);
    };
    std::optional<int> lo = digits();
    if (!lo) {
      pos_ = save;
      return std::nullopt;
    }
    int min = *lo;
    int max = min;
    if (consume(',')) {
      if (consume('}')) return std::make_pair(min, -1);
      std::optional<int> hi = digits();
      if (!hi || !consume('}')) {
        pos_ = save;
        return std::nullopt;
      }
      max = *hi;
      if (max < min) fail("repetition bounds out of order");
      return std::make_pair(min, max);
    }
    if (!consume('}')) {
      pos_ = save;
      return std::nullopt;
    }
    return std::make_pair(min, max);
  }

  NodePtr parse_atom() {
    char c = take();
    switch (c) {
      case '(': {
        if (consume('?')) {
          if (!consume(':')) {
            fail("only (?:...) groups are supported (no lookaround, flags, or "
                 "named groups)");
          }
        }
        if (++depth_ > kMaxGroupDepth) fail("group nesting too deep");
        NodePtr inner = parse_alternation();
        --depth_;
        if (!consume(')')) fail("missing ')'");
        return inner;
      }
      case ')':
        fail("unbalanced ')'");
      case '[':
        return parse_class();
      case '.': {
        std::bitset<256> cls;
        cls.set();
        cls.reset('\n');
        return make_class(cls);
      }
      case '^':
        return std::make_unique<Node>(Node{AssertNode{0}});
      case '$':
        return std::make_unique<Node>(Node{AssertNode{1}});
      case '*':
      case '+':
      case '?':
        fail("quantifier with nothing to repeat");
      case '\\':
        return parse_escape(false);
      default:
        return make_literal(static_cast<unsigned char>(c));
    }
  }

  NodePtr parse_escape(bool in_class) {
    if (at_end()) fail("trailing backslash");
    char c = take();
    switch (c) {
      case 'd':
        return make_class(class_digits());
      case 'D':
        return make_class(~class_digits());
      case 'w':
        return make_class(class_word());
      case 'W':
        return make_class(~class_word());
      case 's':
        return make_class(class_space());
      case 'S':
        return make_class(~class_space());
      case 'n':
        return make_literal('\n');
      case 't':
        return make_literal('\t');
      case 'r':
        return make_literal('\r');
      case 'f':
        return make_literal('\f');
      case 'v':
        return make_literal('\v');
      case 'b':
        if (in_class) return make_literal('\b');
        return std::make_unique<Node>(Node{AssertNode{2}});
      case 'B':
        if (in_class) fail("unsupported escape \\B inside a class");
        return std::make_unique<Node>(Node{AssertNode{3}});
      case 'x': {
        auto hex = [&]() -> int {
          if (at_end()) fail("truncated \\x escape");
          char h = take();
          if (h >= '0' && h <= '9') return h - '0';
          if (h >= 'a' && h <= 'f') return h - 'a' + 10;
          if (h >= 'A' && h <= 'F') return h - 'A' + 10;
          fail("bad \\x escape");
        };
        int hi = hex();
        int lo = hex();
        return make_literal(static_cast<unsigned char>(hi * 16 + lo));
      }
      default:
        if (std::isalnum(static_cast<unsigned char>(c))) {
          // Catches backreferences (\1), \A, \z, \p, \k, ... in one net.
          fail(std::string("unsupported escape \\") + c);
        }
        return make_literal(static_cast<unsigned char>(c));
    }
  }

  NodePtr parse_class() {
    std::bitset<256> cls;
    bool negated = consume('^');
    bool first = true;
    while (true) {
      if (at_end()) fail("missing ']'");
      if (peek() == ']' && !first) {
        take();
        break;
      }
      if (peek() == '[' && pos_ + 1 < p_.size() && p_[pos_ + 1] == ':') {
        fail("POSIX [:name:] classes are unsupported");
      }
      first = false;
      std::bitset<256> item;
      bool single = false;
      unsigned char single_byte = 0;
      if (peek() == '\\') {
        take();
        NodePtr esc = parse_escape(true);
        item = std::get<ByteClassNode>(esc->v).cls;
        if (item.count() == 1) {
          single = true;
          for (int b = 0; b < 256; ++b) {
            if (item.test(b)) single_byte = static_cast<unsigned char>(b);
          }
        }
      } else {
        single = true;
        single_byte = static_cast<unsigned char>(take());
        item.set(single_byte);
      }
      // Range: only when both ends are single bytes.
      if (single && !at_end() && peek() == '-' && pos_ + 1 < p_.size() &&
          p_[pos_ + 1] != ']') {
        take();  // '-'
        unsigned char hi_byte;
        if (peek() == '\\') {
          take();
          NodePtr esc = parse_escape(true);
          const auto& esc_cls = std::get<ByteClassNode>(esc->v).cls;
          if (esc_cls.count() != 1) fail("bad class range endpoint");
          hi_byte = 0;
          for (int b = 0; b < 256; ++b) {
            if (esc_cls.test(b)) hi_byte = static_cast<unsigned char>(b);
          }
        } else {
          hi_byte = static_cast<unsigned char>(take());
        }
        if (hi_byte < single_byte) fail("class range out of order");
        item.reset();
        for (int b = single_byte; b <= hi_byte; ++b) item.set(b);
      }
      cls |= item;
    }
    if (cls.none()) fail("empty character class");
    if (negated) cls.flip();
    return make_class(cls);
  }

  std::string_view p_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

// --- compiler ----------------------------------------------------------------

class Compiler {
 public:
  explicit Compiler(Regex& re) : re_(re) {}

  void compile(const Node& root) {
    emit_node(root);
    append({Regex::Op::kMatch});
  }

 private:
  using Op = Regex::Op;
  using Inst = Regex::Inst;

  std::uint32_t append(Inst inst) {
    if (re_.program_.size() >= kMaxProgramSize) {
      throw PatternUnsupportedError(
          "regex: compiled pattern too large (repetition bounds expand the "
          "program past " +
          std::to_string(kMaxProgramSize) + " states)");
    }
    re_.program_.push_back(inst);
    return static_cast<std::uint32_t>(re_.program_.size() - 1);
  }

  std::uint32_t here() const { return static_cast<std::uint32_t>(re_.program_.size()); }

  std::uint16_t intern_class(const std::bitset<256>& cls) {
    re_.classes_.push_back(cls);
    return static_cast<std::uint16_t>(re_.classes_.size() - 1);
  }

  void emit_node(const Node& node) {
    if (const auto* bc = std::get_if<ByteClassNode>(&node.v)) {
      Inst inst{Op::kByte};
      inst.cls = intern_class(bc->cls);
      append(inst);
    } else if (const auto* cat = std::get_if<ConcatNode>(&node.v)) {
      for (const auto& part : cat->parts) emit_node(*part);
    } else if (const auto* alt = std::get_if<AltNode>(&node.v)) {
      emit_alt(*alt);
    } else if (const auto* rep = std::get_if<RepeatNode>(&node.v)) {
      emit_repeat(*rep);
    } else {
      const auto& a = std::get<AssertNode>(node.v);
      Inst inst{Op::kAssert};
      inst.assert_kind = static_cast<Regex::Assert>(a.kind);
      append(inst);
    }
  }

  void emit_alt(const AltNode& alt) {
    std::vector<std::uint32_t> jumps_to_end;
    for (std::size_t i = 0; i < alt.options.size(); ++i) {
      if (i + 1 < alt.options.size()) {
        std::uint32_t split = append({Op::kSplit});
        re_.program_[split].a = here();
        emit_node(*alt.options[i]);
        jumps_to_end.push_back(append({Op::kJmp}));
        re_.program_[split].b = here();
      } else {
        emit_node(*alt.options[i]);
      }
    }
    for (std::uint32_t j : jumps_to_end) re_.program_[j].a = here();
  }

  void emit_star(const Node& child) {
    std::uint32_t split = append({Op::kSplit});
    re_.program_[split].a = here();
    emit_node(child);
    std::uint32_t back = append({Op::kJmp});
    re_.program_[back].a = split;
    re_.program_[split].b = here();
  }

  void emit_optional(const Node& child) {
    std::uint32_t split = append({Op::kSplit});
    re_.program_[split].a = here();
    emit_node(child);
    re_.program_[split].b = here();
  }

  void emit_repeat(const RepeatNode& rep) {
    for (int i = 0; i < rep.min; ++i) emit_node(*rep.child);
    if (rep.max < 0) {
      emit_star(*rep.child);
    } else {
      for (int i = rep.min; i < rep.max; ++i) emit_optional(*rep.child);
    }
  }

  Regex& re_;
};

Regex Regex::compile(std::string_view pattern, bool multiline) {
  Regex re;
  re.pattern_ = std::string(pattern);
  re.multiline_ = multiline;
  Parser parser(pattern);
  NodePtr root = parser.parse();
  Compiler(re).compile(*root);
  return re;
}

bool Regex::assertion_holds(Assert kind, std::string_view text, std::size_t pos) const {
  const std::size_t n = text.size();
  auto word_at = [&](std::size_t i) {
    return i < n && is_word_byte(static_cast<unsigned char>(text[i]));
  };
  switch (kind) {
    case Assert::kLineStart:
      return pos == 0 || (multiline_ && text[pos - 1] == '\n');
    case Assert::kLineEnd:
      return pos == n || (multiline_ && text[pos] == '\n');
    case Assert::kWordBoundary:
      return (pos > 0 && word_at(pos - 1)) != word_at(pos);
    case Assert::kNotWordBoundary:
      return (pos > 0 && word_at(pos - 1)) == word_at(pos);
  }
  return false;
}

void Regex::add_thread(std::uint32_t pc, std::string_view text, std::size_t pos,
                       std::vector<std::uint32_t>& list, std::vector<std::uint32_t>& seen,
                       std::uint32_t stamp, bool& matched) const {
  if (seen[pc] == stamp) return;
  seen[pc] = stamp;
  const Inst& inst = program_[pc];
  switch (inst.op) {
    case Op::kSplit:
      add_thread(inst.a, text, pos, list, seen, stamp, matched);
      add_thread(inst.b, text, pos, list, seen, stamp, matched);
      break;
    case Op::kJmp:
      add_thread(inst.a, text, pos, list, seen, stamp, matched);
      break;
    case Op::kAssert:
      if (assertion_holds(inst.assert_kind, text, pos)) {
        add_thread(pc + 1, text, pos, list, seen, stamp, matched);
      }
      break;
    case Op::kMatch:
      matched = true;
      break;
    case Op::kByte:
      list.push_back(pc);
      break;
  }
}

bool Regex::search(std::string_view text) const {
  const std::size_t n = text.size();
  std::vector<std::uint32_t> current, next;
  std::vector<std::uint32_t> seen(program_.size(), 0);
  std::uint32_t stamp = 1;
  bool matched = false;
  // Unanchored search: the start state is re-seeded at every position, so a
  // single left-to-right pass covers all match starts.
  add_thread(0, text, 0, current, seen, stamp, matched);
  if (matched) return true;
  for (std::size_t pos = 0; pos < n; ++pos) {
    unsigned char byte = static_cast<unsigned char>(text[pos]);
    ++stamp;
    next.clear();
    for (std::uint32_t pc : current) {
      const Inst& inst = program_[pc];
      if (classes_[inst.cls].test(byte)) {
        add_thread(pc + 1, text, pos + 1, next, seen, stamp, matched);
        if (matched) return true;
      }
    }
    add_thread(0, text, pos + 1, next, seen, stamp, matched);
    if (matched) return true;
    current.swap(next);
  }
  return false;
}

}  // namespace sieve::regex_lite
