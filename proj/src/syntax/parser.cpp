#include "xnose/syntax/parser.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>

namespace xnose::syntax {

namespace {

constexpr int kMaxDepth = 400;

constexpr std::array<std::string_view, 17> kMemberModifiers = {
    "public",  "private", "protected", "internal", "static",   "readonly",
    "const",   "volatile", "virtual",  "override", "abstract", "sealed",
    "extern",  "unsafe",  "new",       "fixed",    "ref",
};

constexpr std::array<std::string_view, 5> kContextualModifiers = {
    "partial", "async", "required", "file", "scoped",
};

constexpr std::array<std::string_view, 11> kAssignmentOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", "?\?=",
};

constexpr std::array<std::string_view, 12> kQueryKeywords = {
    "from", "let", "where", "join", "on", "equals", "into", "orderby",
    "ascending", "descending", "select", "group",
};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

enum class NullableMode { always, pattern };

struct BinaryOp {
  int precedence = -1;
  std::size_t tokens = 1;  // composite shift operators span several tokens
};

class Parser {
 public:
  Parser(const SourceFile& file, std::vector<Token>& tokens,
         std::vector<ParseDiagnostic>& diags)
      : file_(file), src_(file.text()), toks_(tokens), diags_(diags) {}

  SyntaxNode parse_compilation_unit() {
    auto unit = make(NodeKind::compilation_unit);
    const auto start = pos_;
    parse_namespace_body(unit, /*braced=*/false);
    close(unit, start);
    NodeBuilder::set_span(unit, Span{0, src_.size()});
    return unit;
  }

 private:
  // ---------------------------------------------------------------- tokens

  const Token& tok(std::size_t i) const { return toks_[std::min(i, toks_.size() - 1)]; }
  const Token& cur() const { return tok(pos_); }
  const Token& peek(std::size_t k = 1) const { return tok(pos_ + k); }
  bool eof() const { return cur().kind == TokenKind::end_of_file; }
  bool at(std::string_view p) const { return cur().is(p); }
  bool at_ident() const { return cur().kind == TokenKind::identifier; }
  bool at_ident(std::string_view t) const { return cur().is_identifier(t); }
  static bool is_ident(const Token& t) { return t.kind == TokenKind::identifier; }

  std::size_t prev_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }

  Span take() {
    const auto s = cur().span;
    if (!eof()) ++pos_;
    return s;
  }

  bool accept(std::string_view p) {
    if (!at(p)) return false;
    take();
    return true;
  }

  void expect(std::string_view p) {
    if (!accept(p)) error_here("expected '" + std::string(p) + "'");
  }

  void error_here(std::string message) {
    Span s = eof() ? Span{prev_end(), prev_end()} : cur().span;
    // Cascading errors at the same spot add nothing.
    if (!diags_.empty() && diags_.back().span == s) return;
    diags_.push_back(ParseDiagnostic{file_.path(), s, std::move(message), Severity::error});
  }

  // Adjacent tokens with no trivia between them (`>` `>` forming a shift).
  bool adjacent(std::size_t a, std::size_t b) const {
    return tok(a).span.end == tok(b).span.begin;
  }

  // ----------------------------------------------------------------- nodes

  SyntaxNode make(NodeKind kind) const { return SyntaxNode(kind, src_); }

  void close(SyntaxNode& n, std::size_t start) const {
    Span s;
    if (pos_ > start) {
      s = Span{toks_[start].span.begin, toks_[pos_ - 1].span.end};
    } else {
      s = Span{prev_end(), prev_end()};
    }
    for (const auto& c : n.children()) {
      s.begin = std::min(s.begin, c.span().begin);
      s.end = std::max(s.end, c.span().end);
    }
    NodeBuilder::set_span(n, s);
  }

  static void add(SyntaxNode& parent, SyntaxNode child) {
    NodeBuilder::children(parent).push_back(std::move(child));
  }

  SyntaxNode missing(std::string message) {
    error_here(std::move(message));
    auto n = make(NodeKind::error);
    close(n, pos_);
    return n;
  }

  // Consumes at least one token (unless at end of file) into an error node.
  SyntaxNode skip_one(std::string message) {
    error_here(std::move(message));
    auto n = make(NodeKind::error);
    const auto start = pos_;
    take();
    close(n, start);
    return n;
  }

  struct DepthGuard {
    explicit DepthGuard(int& d) : depth(d) { ++depth; }
    ~DepthGuard() { --depth; }
    int& depth;
  };

  bool too_deep() const { return depth_ > kMaxDepth; }

  // ------------------------------------------------------ speculative scans

  std::optional<std::size_t> scan_type_args(std::size_t p) const {
    if (!tok(p).is("<")) return std::nullopt;
    ++p;
    if (tok(p).is(">")) return p + 1;
    if (tok(p).is(",")) {
      while (tok(p).is(",")) ++p;
      if (tok(p).is(">")) return p + 1;
      return std::nullopt;
    }
    while (true) {
      const auto t = scan_type(p, NullableMode::always);
      if (!t) return std::nullopt;
      p = *t;
      if (tok(p).is(",")) {
        ++p;
        continue;
      }
      if (tok(p).is(">")) return p + 1;
      return std::nullopt;
    }
  }

  std::optional<std::size_t> scan_type(std::size_t p, NullableMode mode,
                                       int depth = 0) const {
    if (depth > 64) return std::nullopt;
    const Token& t = tok(p);
    if (t.is("(")) {
      ++p;
      int elements = 0;
      while (true) {
        const auto e = scan_type(p, NullableMode::always, depth + 1);
        if (!e) return std::nullopt;
        p = *e;
        if (is_ident(tok(p))) ++p;
        ++elements;
        if (tok(p).is(",")) {
          ++p;
          continue;
        }
        if (tok(p).is(")")) {
          ++p;
          break;
        }
        return std::nullopt;
      }
      if (elements < 2) return std::nullopt;
    } else if (t.kind == TokenKind::keyword && is_predefined_type(t.text)) {
      ++p;
    } else if (is_ident(t)) {
      if (t.text == "global" && tok(p + 1).is("::")) p += 2;
      if (!is_ident(tok(p))) return std::nullopt;
      ++p;
      if (auto a = scan_type_args(p)) p = *a;
      while ((tok(p).is(".") || tok(p).is("::")) && is_ident(tok(p + 1))) {
        p += 2;
        if (auto a = scan_type_args(p)) p = *a;
      }
    } else {
      return std::nullopt;
    }
    while (true) {
      if (tok(p).is("?")) {
        if (mode == NullableMode::always) {
          ++p;
          continue;
        }
        const Token& n = tok(p + 1);
        if (n.is(")") || n.is(",") || n.is(";") || n.is("]") || n.is("}") ||
            n.is("=>") || n.is("&&") || n.is("||") || n.is("=") ||
            n.kind == TokenKind::end_of_file) {
          ++p;
          continue;
        }
        break;
      }
      if (tok(p).is("*")) {
        ++p;
        continue;
      }
      if (tok(p).is("[")) {
        std::size_t q = p + 1;
        while (tok(q).is(",")) ++q;
        if (tok(q).is("]")) {
          p = q + 1;
          continue;
        }
      }
      break;
    }
    return p;
  }

  // Index of the token matching the bracket at `p`, or nullopt.
  std::optional<std::size_t> matching(std::size_t p) const {
    std::vector<char> stack;
    for (std::size_t i = p; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == TokenKind::end_of_file) return std::nullopt;
      if (t.kind != TokenKind::punctuation || t.text.size() != 1) continue;
      const char c = t.text[0];
      if (c == '(' || c == '[' || c == '{') {
        stack.push_back(c);
      } else if (c == ')' || c == ']' || c == '}') {
        const char open = c == ')' ? '(' : c == ']' ? '[' : '{';
        if (stack.empty() || stack.back() != open) return std::nullopt;
        stack.pop_back();
        if (stack.empty()) return i;
      }
    }
    return std::nullopt;
  }

  bool generic_follows(std::size_t p) const {
    const Token& t = tok(p);
    static constexpr std::array<std::string_view, 19> follow = {
        "(", ")", "]", "}", ":", ";", ",", ".", "?", "==", "!=",
        "|", "^", "&&", "||", "&", "[", "=>", "?.",
    };
    return t.kind == TokenKind::end_of_file ||
           (t.kind == TokenKind::punctuation && contains(follow, t.text)) ||
           t.is(">");
  }

  static bool can_start_expression(const Token& t) {
    switch (t.kind) {
      case TokenKind::identifier:
      case TokenKind::numeric_literal:
      case TokenKind::string_literal:
      case TokenKind::interpolated_string:
      case TokenKind::char_literal:
        return true;
      case TokenKind::keyword: {
        static constexpr std::array<std::string_view, 14> kw = {
            "new",   "this",      "base",     "typeof", "default", "sizeof",  "checked",
            "true",  "unchecked", "delegate", "false",  "null",    "throw",   "stackalloc",
        };
        return contains(kw, t.text) || is_predefined_type(t.text) || t.text == "ref";
      }
      case TokenKind::punctuation: {
        static constexpr std::array<std::string_view, 12> p = {
            "(", "[", "+", "-", "!", "~", "++", "--", "^", "&", "*", "..",
        };
        return contains(p, t.text);
      }
      default:
        return false;
    }
  }

  bool is_lambda_start() const {
    std::size_t p = pos_;
    for (int i = 0; i < 2; ++i) {
      const Token& t = tok(p);
      if ((t.is_identifier("async") || t.is("static")) &&
          (is_ident(tok(p + 1)) || tok(p + 1).is("(") || tok(p + 1).is("static") ||
           tok(p + 1).is_identifier("async"))) {
        ++p;
      }
    }
    if (is_ident(tok(p)) && tok(p + 1).is("=>")) return true;
    if (tok(p).is("(")) {
      const auto close_paren = matching(p);
      return close_paren && tok(*close_paren + 1).is("=>");
    }
    return false;
  }

  bool is_local_function_start() const {
    std::size_t p = pos_;
    while (tok(p).is("static") || tok(p).is("unsafe") || tok(p).is("extern") ||
           tok(p).is_identifier("async")) {
      ++p;
    }
    const auto t = scan_type(p, NullableMode::always);
    if (!t || !is_ident(tok(*t))) return false;
    std::size_t q = *t + 1;
    if (tok(q).is("<")) {
      std::size_t depth = 0;
      for (; q < toks_.size(); ++q) {
        if (tok(q).is("<")) ++depth;
        if (tok(q).is(">") && --depth == 0) break;
        if (tok(q).kind == TokenKind::end_of_file || tok(q).is(";")) return false;
      }
      ++q;
    }
    if (!tok(q).is("(")) return false;
    const auto close_paren = matching(q);
    if (!close_paren) return false;
    const Token& after = tok(*close_paren + 1);
    return after.is("{") || after.is("=>") || after.is_identifier("where");
  }

  bool is_local_declaration_start() const {
    std::size_t p = pos_;
    if (cur().is_identifier("await") || cur().is_identifier("yield")) return false;
    while (tok(p).is("const") || tok(p).is("ref") || tok(p).is("readonly") ||
           tok(p).is_identifier("scoped")) {
      ++p;
    }
    const auto t = scan_type(p, NullableMode::always);
    if (!t || !is_ident(tok(*t))) return false;
    const Token& after = tok(*t + 1);
    return after.is("=") || after.is(";") || after.is(",") ||
           (after.is("[") && tok(p).is("fixed"));
  }

  // ------------------------------------------------ namespaces and types

  void parse_namespace_body(SyntaxNode& parent, bool braced) {
    while (!eof()) {
      if (braced && at("}")) return;
      const auto before = pos_;
      if (at("using") && !peek().is("(") && !is_using_declaration()) {
        add(parent, parse_using_directive());
      } else if (at_ident("global") && peek().is("using")) {
        add(parent, parse_using_directive());
      } else if (at("namespace")) {
        add(parent, parse_namespace());
      } else if (at("extern") && peek().is_identifier("alias")) {
        add(parent, skip_to_semicolon(NodeKind::generic_member));
      } else if (at("}")) {
        add(parent, skip_one("unexpected '}'"));
      } else if (at("[") && (peek().is_identifier("assembly") || peek().is_identifier("module")) &&
                 peek(2).is(":")) {
        add(parent, parse_attribute_list());
      } else if (looks_like_member()) {
        add(parent, parse_member(""));
      } else {
        add(parent, parse_statement());
      }
      if (pos_ == before) add(parent, skip_one("unexpected token"));
    }
  }

  bool is_using_declaration() const {
    // `using var x = ...;` at top level is a statement, not a directive.
    const auto t = scan_type(pos_ + 1, NullableMode::always);
    return t && is_ident(tok(*t)) && tok(*t + 1).is("=");
  }

  bool looks_like_member() const {
    if (at("[")) return true;
    std::size_t p = pos_;
    while (true) {
      const Token& t = tok(p);
      if (t.kind == TokenKind::keyword && contains(kMemberModifiers, t.text) && !t.is("ref")) {
        ++p;
        continue;
      }
      if (is_ident(t) && contains(kContextualModifiers, t.text) &&
          (is_ident(tok(p + 1)) || tok(p + 1).kind == TokenKind::keyword)) {
        ++p;
        continue;
      }
      break;
    }
    const Token& t = tok(p);
    return t.is("class") || t.is("struct") || t.is("interface") || t.is("enum") ||
           t.is("delegate") || (t.is_identifier("record") && (is_ident(tok(p + 1)) ||
                                                            tok(p + 1).is("class") ||
                                                            tok(p + 1).is("struct"))) ||
           p > pos_;
  }

  SyntaxNode parse_using_directive() {
    auto n = make(NodeKind::using_directive);
    const auto start = pos_;
    if (at_ident("global")) take();
    expect("using");
    if (at("static")) take();
    if (is_ident(cur()) && peek().is("=")) {
      take();
      take();
    }
    const auto name_start = cur().span.begin;
    auto name_end = name_start;
    while (!eof() && !at(";") && !at("}") && !at("{")) name_end = take().end;
    NodeBuilder::set_name(n, Span{name_start, std::max(name_start, name_end)});
    expect(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_namespace() {
    auto n = make(NodeKind::namespace_declaration);
    const auto start = pos_;
    take();  // namespace
    const auto name_start = cur().span.begin;
    auto name_end = name_start;
    while (is_ident(cur()) || at(".") || at("::")) name_end = take().end;
    NodeBuilder::set_name(n, Span{name_start, std::max(name_start, name_end)});
    if (accept(";")) {
      parse_namespace_body(n, /*braced=*/false);
    } else if (accept("{")) {
      parse_namespace_body(n, /*braced=*/true);
      expect("}");
      accept(";");
    } else {
      error_here("expected '{' or ';'");
    }
    close(n, start);
    return n;
  }

  SyntaxNode skip_to_semicolon(NodeKind kind) {
    auto n = make(kind);
    const auto start = pos_;
    while (!eof() && !at(";") && !at("}")) {
      if (at("{") || at("(") || at("[")) {
        skip_balanced();
      } else {
        take();
      }
    }
    accept(";");
    close(n, start);
    return n;
  }

  void skip_balanced() {
    const auto end = matching(pos_);
    if (!end) {
      take();
      return;
    }
    while (pos_ <= *end && !eof()) take();
  }

  void parse_attribute_lists(SyntaxNode& parent) {
    while (at("[")) add(parent, parse_attribute_list());
  }

  SyntaxNode parse_attribute_list() {
    auto n = make(NodeKind::attribute_list);
    const auto start = pos_;
    take();  // [
    if ((is_ident(cur()) || cur().kind == TokenKind::keyword) && peek().is(":") &&
        !peek().is("::")) {
      take();
      take();
    }
    while (!eof() && !at("]")) {
      const auto before = pos_;
      add(n, parse_attribute());
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    expect("]");
    close(n, start);
    return n;
  }

  SyntaxNode parse_attribute() {
    auto n = make(NodeKind::attribute);
    const auto start = pos_;
    const auto name_start = cur().span.begin;
    auto name_end = name_start;
    if (!is_ident(cur())) {
      add(n, missing("expected attribute name"));
      close(n, start);
      return n;
    }
    while (is_ident(cur()) || at(".") || at("::")) {
      name_end = take().end;
      if (at("<")) {
        if (auto e = scan_type_args(pos_)) {
          while (pos_ < *e) name_end = take().end;
        }
      }
    }
    NodeBuilder::set_name(n, Span{name_start, name_end});
    if (at("(")) {
      auto args = make(NodeKind::argument_list);
      const auto args_start = pos_;
      take();
      while (!eof() && !at(")")) {
        const auto before = pos_;
        auto arg = make(NodeKind::attribute_argument);
        const auto arg_start = pos_;
        if (is_ident(cur()) && (peek().is("=") || (peek().is(":") && !peek().is("::")))) {
          NodeBuilder::set_name(arg, take());
          take();
        }
        add(arg, parse_expression());
        close(arg, arg_start);
        add(args, std::move(arg));
        if (!accept(",")) break;
        if (pos_ == before) break;
      }
      expect(")");
      close(args, args_start);
      add(n, std::move(args));
    }
    close(n, start);
    return n;
  }

  bool take_modifiers() {
    bool any = false;
    while (true) {
      const Token& t = cur();
      if (t.kind == TokenKind::keyword && contains(kMemberModifiers, t.text)) {
        // `ref` belongs to the type in `ref int M()`; keep it as a modifier.
        take();
        any = true;
        continue;
      }
      if (is_ident(t) && contains(kContextualModifiers, t.text) &&
          (is_ident(peek()) || peek().kind == TokenKind::keyword)) {
        take();
        any = true;
        continue;
      }
      return any;
    }
  }

  SyntaxNode parse_member(std::string_view type_name) {
    DepthGuard guard(depth_);
    const auto start = pos_;
    SyntaxNode attrs_holder = make(NodeKind::generic_member);
    parse_attribute_lists(attrs_holder);
    take_modifiers();

    auto finish = [&](SyntaxNode n) {
      auto& kids = NodeBuilder::children(n);
      auto attrs = NodeBuilder::children(attrs_holder);
      kids.insert(kids.begin(), std::make_move_iterator(attrs.begin()),
                  std::make_move_iterator(attrs.end()));
      close(n, start);
      return n;
    };

    if (too_deep()) return finish(skip_to_semicolon(NodeKind::error));

    const Token& t = cur();
    if (t.is("class") || t.is("struct") || t.is("interface") ||
        (t.is_identifier("record") && (is_ident(peek()) || peek().is("class") ||
                                       peek().is("struct")))) {
      return finish(parse_type_declaration());
    }
    if (t.is("enum")) return finish(parse_enum());
    if (t.is("delegate")) {
      auto n = skip_to_semicolon(NodeKind::delegate_declaration);
      return finish(std::move(n));
    }
    if (t.is("~")) {
      auto n = make(NodeKind::destructor_declaration);
      take();
      if (is_ident(cur())) NodeBuilder::set_name(n, take());
      add(n, parse_parameter_list());
      parse_member_body(n);
      return finish(std::move(n));
    }
    if (t.is("event")) return finish(skip_to_semicolon_or_block(NodeKind::generic_member));
    if ((t.is("implicit") || t.is("explicit")) && peek().is("operator")) {
      return finish(parse_operator(true));
    }
    if (is_ident(t) && t.text == type_name && peek().is("(")) {
      auto n = make(NodeKind::constructor_declaration);
      NodeBuilder::set_name(n, take());
      add(n, parse_parameter_list());
      if (at(":")) {
        auto init = make(NodeKind::generic_member);
        const auto init_start = pos_;
        take();
        if (at("base") || at("this")) NodeBuilder::set_name(init, take());
        if (at("(")) add(init, parse_argument_list("(", ")"));
        close(init, init_start);
        add(n, std::move(init));
      }
      parse_member_body(n);
      return finish(std::move(n));
    }

    const auto type_end = scan_type(pos_, NullableMode::always);
    if (!type_end) {
      if (pos_ == start) {
        error_here("expected member declaration");
        return skip_to_semicolon_or_block(NodeKind::error);
      }
      error_here("expected member declaration");
      return finish(skip_to_semicolon_or_block(NodeKind::error));
    }
    auto type_node = parse_type();
    if (at("operator")) {
      auto n = parse_operator(false);
      NodeBuilder::children(n).insert(NodeBuilder::children(n).begin(), std::move(type_node));
      return finish(std::move(n));
    }
    if (at("this") && peek().is("[")) {
      auto n = make(NodeKind::property_declaration);
      add(n, std::move(type_node));
      NodeBuilder::set_name(n, take());
      add(n, parse_parameter_list());
      parse_property_body(n);
      return finish(std::move(n));
    }
    if (!is_ident(cur())) {
      error_here("expected identifier");
      auto n = make(NodeKind::error);
      add(n, std::move(type_node));
      return finish(std::move(n));
    }
    // Explicit interface implementations: IFoo<T>.Bar
    Span name = take();
    while (at(".") || at("<")) {
      if (at("<")) {
        const auto e = scan_type_args(pos_);
        if (!e || !tok(*e).is(".")) break;
        while (pos_ < *e) take();
      }
      if (!at(".") || !is_ident(peek())) break;
      take();
      name = take();
    }

    if (at("(") || at("<")) {
      auto n = make(NodeKind::method_declaration);
      NodeBuilder::set_name(n, name);
      add(n, std::move(type_node));
      if (at("<")) add(n, parse_type_parameter_list());
      add(n, parse_parameter_list());
      parse_constraints(n);
      parse_member_body(n);
      return finish(std::move(n));
    }
    if (at("{") || at("=>")) {
      auto n = make(NodeKind::property_declaration);
      NodeBuilder::set_name(n, name);
      add(n, std::move(type_node));
      parse_property_body(n);
      return finish(std::move(n));
    }
    auto n = make(NodeKind::field_declaration);
    add(n, std::move(type_node));
    add(n, parse_declarator_from(name));
    while (accept(",")) {
      if (!is_ident(cur())) {
        error_here("expected identifier");
        break;
      }
      add(n, parse_declarator_from(take()));
    }
    expect(";");
    return finish(std::move(n));
  }

  SyntaxNode skip_to_semicolon_or_block(NodeKind kind) {
    auto n = make(kind);
    const auto start = pos_;
    while (!eof() && !at(";") && !at("}")) {
      if (at("{")) {
        skip_balanced();
        close(n, start);
        return n;
      }
      if (at("(") || at("[")) {
        skip_balanced();
      } else {
        take();
      }
    }
    accept(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_operator(bool conversion) {
    auto n = make(NodeKind::generic_member);
    const auto start = pos_;
    if (conversion) take();  // implicit / explicit
    take();                  // operator
    if (conversion) {
      add(n, parse_type());
    } else {
      while (!eof() && !at("(") && !at("{") && !at(";")) take();
    }
    add(n, parse_parameter_list());
    parse_member_body(n);
    close(n, start);
    return n;
  }

  SyntaxNode parse_declarator_from(Span name) {
    auto d = make(NodeKind::variable_declarator);
    const auto start = pos_ - 1;
    NodeBuilder::set_name(d, name);
    if (at("[")) skip_balanced();  // fixed-size buffers
    if (accept("=")) {
      if (at("{")) {
        add(d, parse_initializer());
      } else {
        add(d, parse_expression());
      }
    }
    close(d, start);
    return d;
  }

  void parse_constraints(SyntaxNode& n) {
    if (!at_ident("where")) return;
    auto c = make(NodeKind::generic_member);
    const auto start = pos_;
    while (!eof() && !at("{") && !at(";") && !at("=>")) {
      if (at("(")) {
        skip_balanced();
      } else {
        take();
      }
    }
    close(c, start);
    add(n, std::move(c));
  }

  void parse_member_body(SyntaxNode& n) {
    if (at("{")) {
      add(n, parse_block());
    } else if (at("=>")) {
      add(n, parse_arrow_clause());
      expect(";");
    } else if (!accept(";")) {
      error_here("expected '{' or ';'");
    }
  }

  SyntaxNode parse_arrow_clause() {
    auto a = make(NodeKind::arrow_expression_clause);
    const auto start = pos_;
    take();  // =>
    add(a, parse_expression());
    close(a, start);
    return a;
  }

  void parse_property_body(SyntaxNode& n) {
    if (at("=>")) {
      add(n, parse_arrow_clause());
      expect(";");
      return;
    }
    if (!at("{")) {
      error_here("expected '{'");
      return;
    }
    take();
    while (!eof() && !at("}")) {
      const auto before = pos_;
      auto accessor = make(NodeKind::generic_member);
      const auto start = pos_;
      parse_attribute_lists(accessor);
      take_modifiers();
      if (is_ident(cur())) {
        NodeBuilder::set_name(accessor, take());
      } else {
        error_here("expected accessor");
        if (at("{") || at(";") || at("=>")) {
          // fall through to the body
        } else {
          take();
        }
      }
      if (at("{")) {
        add(accessor, parse_block());
      } else if (at("=>")) {
        add(accessor, parse_arrow_clause());
        expect(";");
      } else {
        accept(";");
      }
      close(accessor, start);
      add(n, std::move(accessor));
      if (pos_ == before) add(n, skip_one("unexpected token in accessor list"));
    }
    expect("}");
    if (accept("=")) {
      add(n, at("{") ? parse_initializer() : parse_expression());
      expect(";");
    }
  }

  SyntaxNode parse_type_parameter_list() {
    auto n = make(NodeKind::type_parameter_list);
    const auto start = pos_;
    take();  // <
    int depth = 1;
    while (!eof() && depth > 0) {
      if (at("<")) ++depth;
      if (at(">")) --depth;
      if (at("(") || at("{") || at(";")) {
        error_here("expected '>'");
        break;
      }
      take();
    }
    close(n, start);
    return n;
  }

  SyntaxNode parse_parameter_list() {
    const bool bracket = at("[");
    const std::string_view close_tok = bracket ? "]" : ")";
    auto n = make(NodeKind::parameter_list);
    const auto start = pos_;
    if (!accept(bracket ? "[" : "(")) {
      error_here("expected '('");
      close(n, start);
      return n;
    }
    while (!eof() && !at(close_tok)) {
      const auto before = pos_;
      auto p = make(NodeKind::parameter);
      const auto p_start = pos_;
      parse_attribute_lists(p);
      while (at("this") || at("ref") || at("out") || at("in") || at("params") ||
             at("readonly") || at_ident("scoped")) {
        take();
      }
      if (at_ident("__arglist")) {
        NodeBuilder::set_name(p, take());
      } else if (const auto t = scan_type(pos_, NullableMode::always);
                 t && is_ident(tok(*t))) {
        add(p, parse_type());
        NodeBuilder::set_name(p, take());
      } else if (is_ident(cur())) {
        NodeBuilder::set_name(p, take());  // untyped lambda parameter
      } else {
        error_here("expected parameter");
        close(p, p_start);
        add(n, std::move(p));
        break;
      }
      if (accept("=")) add(p, parse_expression());
      close(p, p_start);
      add(n, std::move(p));
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    expect(close_tok);
    close(n, start);
    return n;
  }

  SyntaxNode parse_type_declaration() {
    NodeKind kind = NodeKind::class_declaration;
    if (at("struct")) kind = NodeKind::struct_declaration;
    if (at("interface")) kind = NodeKind::interface_declaration;
    if (at_ident("record")) kind = NodeKind::record_declaration;
    auto n = make(kind);
    const auto start = pos_;
    take();
    if (kind == NodeKind::record_declaration && (at("class") || at("struct"))) take();
    if (!is_ident(cur())) {
      error_here("expected type name");
      close(n, start);
      return n;
    }
    NodeBuilder::set_name(n, take());
    const std::string type_name(n.name());
    if (at("<")) add(n, parse_type_parameter_list());
    if (at("(")) add(n, parse_parameter_list());
    if (at(":")) {
      auto bases = make(NodeKind::base_list);
      const auto bases_start = pos_;
      take();
      while (!eof()) {
        if (!scan_type(pos_, NullableMode::always)) {
          error_here("expected base type");
          break;
        }
        add(bases, parse_type());
        if (at("(")) add(bases, parse_argument_list("(", ")"));
        if (!accept(",")) break;
      }
      close(bases, bases_start);
      add(n, std::move(bases));
    }
    parse_constraints(n);
    if (accept("{")) {
      while (!eof() && !at("}")) {
        const auto before = pos_;
        add(n, parse_member(type_name));
        if (pos_ == before) add(n, skip_one("unexpected token in type body"));
      }
      expect("}");
      accept(";");
    } else if (!accept(";")) {
      error_here("expected '{'");
    }
    close(n, start);
    return n;
  }

  SyntaxNode parse_enum() {
    auto n = make(NodeKind::enum_declaration);
    const auto start = pos_;
    take();
    if (is_ident(cur())) NodeBuilder::set_name(n, take());
    if (accept(":")) add(n, parse_type());
    if (at("{")) {
      skip_balanced();
    } else {
      error_here("expected '{'");
    }
    accept(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_type() {
    auto n = make(NodeKind::type);
    const auto start = pos_;
    const auto end = scan_type(pos_, NullableMode::always);
    if (!end) {
      return missing("expected type");
    }
    while (pos_ < *end) take();
    close(n, start);
    return n;
  }

  SyntaxNode parse_pattern_type() {
    auto n = make(NodeKind::type);
    const auto start = pos_;
    const auto end = scan_type(pos_, NullableMode::pattern);
    if (!end) return missing("expected type");
    while (pos_ < *end) take();
    close(n, start);
    return n;
  }

  // ------------------------------------------------------------ statements

  SyntaxNode parse_block() {
    auto n = make(NodeKind::block);
    const auto start = pos_;
    take();  // {
    while (!eof() && !at("}")) {
      // A member modifier here almost always means a missing '}'.
      if (at("public") || at("private") || at("protected") || at("internal")) {
        error_here("expected '}'");
        close(n, start);
        return n;
      }
      const auto before = pos_;
      add(n, parse_statement());
      if (pos_ == before) add(n, skip_one("unexpected token"));
    }
    expect("}");
    close(n, start);
    return n;
  }

  SyntaxNode parse_embedded_statement() { return parse_statement(); }

  SyntaxNode parse_statement() {
    DepthGuard guard(depth_);
    if (too_deep()) return skip_one("nesting too deep");
    const Token& t = cur();
    if (t.is("{")) return parse_block();
    if (t.is(";")) return single(NodeKind::empty_statement);
    if (t.kind == TokenKind::keyword) {
      if (t.text == "if") return parse_if();
      if (t.text == "for") return parse_for();
      if (t.text == "foreach") return parse_foreach();
      if (t.text == "while") return parse_while();
      if (t.text == "do") return parse_do();
      if (t.text == "switch") return parse_switch_statement();
      if (t.text == "return") return parse_jump(NodeKind::return_statement);
      if (t.text == "throw") return parse_jump(NodeKind::throw_statement);
      if (t.text == "break") return parse_jump(NodeKind::break_statement);
      if (t.text == "continue") return parse_jump(NodeKind::continue_statement);
      if (t.text == "goto") return parse_goto();
      if (t.text == "try") return parse_try();
      if (t.text == "using") return parse_using();
      if (t.text == "lock") return parse_keyword_paren_statement(NodeKind::lock_statement);
      if (t.text == "fixed") return parse_fixed();
      if ((t.text == "checked" || t.text == "unchecked") && peek().is("{")) {
        return parse_keyword_block(NodeKind::checked_statement);
      }
      if (t.text == "unsafe" && peek().is("{")) {
        return parse_keyword_block(NodeKind::unsafe_statement);
      }
      if (t.text == "else") return skip_one("'else' without 'if'");
      if (t.text == "case" || t.text == "default") {
        if (t.text == "case" || peek().is(":")) {
          return skip_one("case label outside switch");
        }
      }
    }
    if (t.is_identifier("yield") && (peek().is("return") || peek().is("break"))) {
      auto n = make(NodeKind::yield_statement);
      const auto start = pos_;
      take();
      const bool is_return = at("return");
      take();
      if (is_return) add(n, parse_expression());
      expect(";");
      close(n, start);
      return n;
    }
    if (t.is_identifier("await") && peek().is("foreach")) return parse_foreach();
    if (t.is_identifier("await") && peek().is("using")) return parse_using();
    if (is_ident(t) && peek().is(":")) {
      auto n = make(NodeKind::labeled_statement);
      const auto start = pos_;
      NodeBuilder::set_name(n, take());
      take();
      if (!at("}")) add(n, parse_statement());
      close(n, start);
      return n;
    }
    if (is_local_function_start()) return parse_local_function();
    if (is_local_declaration_start()) return parse_local_declaration(NodeKind::local_declaration_statement, true);
    return parse_expression_statement();
  }

  SyntaxNode single(NodeKind kind) {
    auto n = make(kind);
    const auto start = pos_;
    take();
    close(n, start);
    return n;
  }

  SyntaxNode parse_expression_statement() {
    auto n = make(NodeKind::expression_statement);
    const auto start = pos_;
    if (!can_start_expression(cur())) {
      if (at("}") || eof()) return missing("expected statement");
      auto err = skip_one("unexpected token");
      return err;
    }
    add(n, parse_expression());
    if (pos_ == start) {
      close(n, start);
      return n;
    }
    expect(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_local_declaration(NodeKind kind, bool with_semicolon) {
    auto n = make(kind);
    const auto start = pos_;
    while (at_ident("await") || at("using") || at("const") || at("ref") ||
           at("readonly") || at_ident("scoped")) {
      take();
    }
    add(n, parse_type());
    while (true) {
      if (!is_ident(cur())) {
        error_here("expected identifier");
        break;
      }
      auto d = make(NodeKind::variable_declarator);
      const auto d_start = pos_;
      NodeBuilder::set_name(d, take());
      if (at("[")) skip_balanced();
      if (accept("=")) {
        add(d, at("{") ? parse_initializer() : parse_expression());
      }
      close(d, d_start);
      add(n, std::move(d));
      if (!accept(",")) break;
    }
    if (with_semicolon) expect(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_local_function() {
    auto n = make(NodeKind::local_function_statement);
    const auto start = pos_;
    while (at("static") || at("unsafe") || at("extern") || at_ident("async")) take();
    add(n, parse_type());
    NodeBuilder::set_name(n, take());
    if (at("<")) add(n, parse_type_parameter_list());
    add(n, parse_parameter_list());
    parse_constraints(n);
    parse_member_body(n);
    close(n, start);
    return n;
  }

  SyntaxNode parse_paren_condition(SyntaxNode& n) {
    expect("(");
    auto cond = parse_expression();
    expect(")");
    (void)n;
    return cond;
  }

  SyntaxNode parse_if() {
    auto n = make(NodeKind::if_statement);
    const auto start = pos_;
    take();
    add(n, parse_paren_condition(n));
    add(n, parse_embedded_statement());
    if (at("else")) {
      auto e = make(NodeKind::else_clause);
      const auto e_start = pos_;
      take();
      add(e, parse_embedded_statement());
      close(e, e_start);
      add(n, std::move(e));
    }
    close(n, start);
    return n;
  }

  SyntaxNode parse_for() {
    auto n = make(NodeKind::for_statement);
    const auto start = pos_;
    take();
    expect("(");
    if (!at(";")) {
      if (is_local_declaration_start()) {
        add(n, parse_local_declaration(NodeKind::variable_declaration, false));
      } else {
        parse_expression_list(n, ";");
      }
    }
    expect(";");
    if (!at(";")) add(n, parse_expression());
    expect(";");
    if (!at(")")) parse_expression_list(n, ")");
    expect(")");
    add(n, parse_embedded_statement());
    close(n, start);
    return n;
  }

  void parse_expression_list(SyntaxNode& n, std::string_view terminator) {
    while (!eof() && !at(terminator)) {
      const auto before = pos_;
      add(n, parse_expression());
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
  }

  SyntaxNode parse_foreach() {
    auto n = make(NodeKind::foreach_statement);
    const auto start = pos_;
    if (at_ident("await")) take();
    take();  // foreach
    expect("(");
    if (const auto t = scan_type(pos_, NullableMode::always);
        t && is_ident(tok(*t)) && tok(*t + 1).is("in")) {
      while (at("ref") || at("readonly")) take();
      add(n, parse_type());
      NodeBuilder::set_name(n, take());
    } else {
      add(n, parse_expression());
    }
    expect("in");
    add(n, parse_expression());
    expect(")");
    add(n, parse_embedded_statement());
    close(n, start);
    return n;
  }

  SyntaxNode parse_while() {
    auto n = make(NodeKind::while_statement);
    const auto start = pos_;
    take();
    add(n, parse_paren_condition(n));
    add(n, parse_embedded_statement());
    close(n, start);
    return n;
  }

  SyntaxNode parse_do() {
    auto n = make(NodeKind::do_statement);
    const auto start = pos_;
    take();
    add(n, parse_embedded_statement());
    expect("while");
    add(n, parse_paren_condition(n));
    expect(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_switch_statement() {
    auto n = make(NodeKind::switch_statement);
    const auto start = pos_;
    take();
    add(n, parse_expression());
    if (!accept("{")) {
      error_here("expected '{'");
      close(n, start);
      return n;
    }
    while (!eof() && !at("}")) {
      const auto before = pos_;
      auto section = make(NodeKind::switch_section);
      const auto s_start = pos_;
      while (at("case") || (at("default") && peek().is(":"))) {
        auto label = make(NodeKind::case_label);
        const auto l_start = pos_;
        if (accept("case")) {
          add(label, parse_pattern());
          if (at_ident("when")) {
            take();
            add(label, parse_expression());
          }
        } else {
          take();
        }
        expect(":");
        close(label, l_start);
        add(section, std::move(label));
      }
      while (!eof() && !at("}") && !at("case") && !(at("default") && peek().is(":"))) {
        const auto stmt_before = pos_;
        add(section, parse_statement());
        if (pos_ == stmt_before) add(section, skip_one("unexpected token"));
      }
      close(section, s_start);
      add(n, std::move(section));
      if (pos_ == before) add(n, skip_one("unexpected token in switch"));
    }
    expect("}");
    close(n, start);
    return n;
  }

  SyntaxNode parse_jump(NodeKind kind) {
    auto n = make(kind);
    const auto start = pos_;
    take();
    if (!at(";") && !at("}") && can_start_expression(cur())) add(n, parse_expression());
    expect(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_goto() {
    auto n = make(NodeKind::goto_statement);
    const auto start = pos_;
    take();
    if (accept("case")) {
      add(n, parse_expression());
    } else if (!accept("default") && is_ident(cur())) {
      NodeBuilder::set_name(n, take());
    }
    expect(";");
    close(n, start);
    return n;
  }

  SyntaxNode parse_try() {
    auto n = make(NodeKind::try_statement);
    const auto start = pos_;
    take();
    if (at("{")) {
      add(n, parse_block());
    } else {
      error_here("expected '{'");
    }
    while (at("catch")) {
      auto c = make(NodeKind::catch_clause);
      const auto c_start = pos_;
      take();
      if (accept("(")) {
        add(c, parse_type());
        if (is_ident(cur())) NodeBuilder::set_name(c, take());
        expect(")");
      }
      if (at_ident("when")) {
        take();
        add(c, parse_paren_condition(c));
      }
      if (at("{")) {
        add(c, parse_block());
      } else {
        error_here("expected '{'");
      }
      close(c, c_start);
      add(n, std::move(c));
    }
    if (at("finally")) {
      auto f = make(NodeKind::finally_clause);
      const auto f_start = pos_;
      take();
      if (at("{")) {
        add(f, parse_block());
      } else {
        error_here("expected '{'");
      }
      close(f, f_start);
      add(n, std::move(f));
    }
    close(n, start);
    return n;
  }

  SyntaxNode parse_using() {
    const std::size_t offset = at_ident("await") ? 1 : 0;
    if (!peek(offset + 1).is("(")) {
      return parse_local_declaration(NodeKind::local_declaration_statement, true);
    }
    auto n = make(NodeKind::using_statement);
    const auto start = pos_;
    if (offset) take();
    take();  // using
    take();  // (
    if (is_local_declaration_start()) {
      add(n, parse_local_declaration(NodeKind::variable_declaration, false));
    } else {
      add(n, parse_expression());
    }
    expect(")");
    add(n, parse_embedded_statement());
    close(n, start);
    return n;
  }

  SyntaxNode parse_fixed() {
    auto n = make(NodeKind::fixed_statement);
    const auto start = pos_;
    take();
    expect("(");
    add(n, parse_local_declaration(NodeKind::variable_declaration, false));
    expect(")");
    add(n, parse_embedded_statement());
    close(n, start);
    return n;
  }

  SyntaxNode parse_keyword_paren_statement(NodeKind kind) {
    auto n = make(kind);
    const auto start = pos_;
    take();
    add(n, parse_paren_condition(n));
    add(n, parse_embedded_statement());
    close(n, start);
    return n;
  }

  SyntaxNode parse_keyword_block(NodeKind kind) {
    auto n = make(kind);
    const auto start = pos_;
    take();
    add(n, parse_block());
    close(n, start);
    return n;
  }

  // ----------------------------------------------------------- expressions

  SyntaxNode parse_expression() {
    DepthGuard guard(depth_);
    if (too_deep()) {
      if (eof()) return missing("nesting too deep");
      return skip_one("nesting too deep");
    }
    if (is_lambda_start()) return parse_lambda();
    const auto start = pos_;
    auto lhs = parse_conditional();
    if (auto op = assignment_operator()) {
      auto n = make(NodeKind::assignment_expression);
      const auto op_begin = cur().span.begin;
      Span op_span{op_begin, op_begin};
      for (std::size_t i = 0; i < *op; ++i) op_span.end = take().end;
      NodeBuilder::set_op(n, op_span);
      add(n, std::move(lhs));
      if (at("{")) {
        add(n, parse_initializer());
      } else {
        add(n, parse_expression());
      }
      close(n, start);
      return n;
    }
    return lhs;
  }

  // Token count of the assignment operator at the cursor, if any.
  std::optional<std::size_t> assignment_operator() const {
    const Token& t = cur();
    if (t.kind != TokenKind::punctuation) return std::nullopt;
    if (t.text == ">") {
      // >>= and >>>= are lexed as separate adjacent tokens.
      if (peek().is(">=") && adjacent(pos_, pos_ + 1)) return 2;
      if (peek().is(">") && peek(2).is(">=") && adjacent(pos_, pos_ + 1) &&
          adjacent(pos_ + 1, pos_ + 2)) {
        return 3;
      }
      return std::nullopt;
    }
    if (contains(kAssignmentOps, t.text)) return 1;
    return std::nullopt;
  }

  SyntaxNode parse_conditional() {
    const auto start = pos_;
    auto cond = parse_binary(0);
    if (at("?")) {
      auto n = make(NodeKind::conditional_expression);
      NodeBuilder::set_op(n, take());
      add(n, std::move(cond));
      add(n, parse_expression());
      expect(":");
      add(n, parse_expression());
      close(n, start);
      return n;
    }
    return cond;
  }

  BinaryOp binary_operator() const {
    const Token& t = cur();
    if (t.kind == TokenKind::keyword) {
      if (t.text == "is" || t.text == "as") return {8, 1};
      return {};
    }
    if (t.kind != TokenKind::punctuation) return {};
    const auto s = t.text;
    if (s == "??") return {1, 1};
    if (s == "||") return {2, 1};
    if (s == "&&") return {3, 1};
    if (s == "|") return {4, 1};
    if (s == "^") return {5, 1};
    if (s == "&") return {6, 1};
    if (s == "==" || s == "!=") return {7, 1};
    if (s == ">") {
      if (peek().is(">") && adjacent(pos_, pos_ + 1)) {
        if (peek(2).is(">") && adjacent(pos_ + 1, pos_ + 2)) {
          if (peek(3).is(">=") && adjacent(pos_ + 2, pos_ + 3)) return {};
          return {9, 3};
        }
        if (peek(2).is(">=") && adjacent(pos_ + 1, pos_ + 2)) return {};
        return {9, 2};
      }
      if (peek().is(">=") && adjacent(pos_, pos_ + 1)) return {};
      return {8, 1};
    }
    if (s == "<" || s == "<=" || s == ">=") return {8, 1};
    if (s == "<<") return {9, 1};
    if (s == "+" || s == "-") return {10, 1};
    if (s == "*" || s == "/" || s == "%") return {11, 1};
    if (s == "..") return {12, 1};
    return {};
  }

  SyntaxNode parse_binary(int min_prec) {
    const auto start = pos_;
    auto left = parse_unary();
    while (true) {
      const auto op = binary_operator();
      if (op.precedence < 0 || op.precedence < min_prec) break;
      DepthGuard guard(depth_);
      if (too_deep()) break;
      if (at("is")) {
        auto n = make(NodeKind::is_pattern_expression);
        NodeBuilder::set_op(n, take());
        add(n, std::move(left));
        add(n, parse_pattern());
        close(n, start);
        left = std::move(n);
        continue;
      }
      if (at("as")) {
        auto n = make(NodeKind::binary_expression);
        NodeBuilder::set_op(n, take());
        add(n, std::move(left));
        add(n, parse_pattern_type());
        close(n, start);
        left = std::move(n);
        continue;
      }
      const bool range = at("..");
      auto n = make(range ? NodeKind::range_expression : NodeKind::binary_expression);
      const auto op_begin = cur().span.begin;
      Span op_span{op_begin, op_begin};
      for (std::size_t i = 0; i < op.tokens; ++i) op_span.end = take().end;
      NodeBuilder::set_op(n, op_span);
      add(n, std::move(left));
      if (range) {
        if (can_start_expression(cur())) add(n, parse_binary(op.precedence + 1));
      } else {
        // ?? is right associative.
        add(n, parse_binary(op.precedence == 1 ? op.precedence : op.precedence + 1));
      }
      close(n, start);
      left = std::move(n);
    }
    return left;
  }

  SyntaxNode parse_unary() {
    DepthGuard guard(depth_);
    if (too_deep()) {
      if (eof()) return missing("nesting too deep");
      return skip_one("nesting too deep");
    }
    const auto start = pos_;
    const Token& t = cur();
    SyntaxNode result;
    if (t.kind == TokenKind::punctuation &&
        (t.text == "+" || t.text == "-" || t.text == "!" || t.text == "~" ||
         t.text == "++" || t.text == "--" || t.text == "^" || t.text == "&" ||
         t.text == "*")) {
      auto n = make(NodeKind::prefix_unary_expression);
      NodeBuilder::set_op(n, take());
      add(n, parse_unary());
      close(n, start);
      result = std::move(n);
    } else if (t.is("..")) {
      auto n = make(NodeKind::range_expression);
      NodeBuilder::set_op(n, take());
      if (can_start_expression(cur())) add(n, parse_unary());
      close(n, start);
      result = std::move(n);
    } else if (t.is_identifier("await") && can_start_expression(peek()) &&
               !peek().is("++") && !peek().is("--") && !(peek().is("-") || peek().is("+")) &&
               !peek().is("*") && !peek().is("&") && !peek().is("[")) {
      auto n = make(NodeKind::await_expression);
      take();
      add(n, parse_unary());
      close(n, start);
      result = std::move(n);
    } else if (t.is("throw")) {
      auto n = make(NodeKind::throw_expression);
      take();
      add(n, parse_binary(0));
      close(n, start);
      result = std::move(n);
    } else if (t.is("ref")) {
      auto n = make(NodeKind::ref_expression);
      take();
      accept("readonly");
      add(n, parse_unary());
      close(n, start);
      result = std::move(n);
    } else if (t.is("(") && is_cast()) {
      auto n = make(NodeKind::cast_expression);
      take();
      add(n, parse_type());
      expect(")");
      add(n, parse_unary());
      close(n, start);
      result = std::move(n);
    } else {
      result = parse_postfix(parse_primary(), start);
    }
    // switch / with bind tighter than any binary operator but follow the
    // unary operand.
    while (true) {
      if (at("switch") && peek().is("{")) {
        result = parse_switch_expression(std::move(result), start);
      } else if (at_ident("with") && peek().is("{")) {
        auto n = make(NodeKind::with_expression);
        NodeBuilder::set_op(n, take());
        add(n, std::move(result));
        add(n, parse_initializer());
        close(n, start);
        result = std::move(n);
      } else {
        break;
      }
    }
    return result;
  }

  bool is_cast() const {
    const auto end = scan_type(pos_ + 1, NullableMode::always);
    if (!end || !tok(*end).is(")")) return false;
    const Token& first = tok(pos_ + 1);
    const Token& after = tok(*end + 1);
    const bool predefined = first.kind == TokenKind::keyword && is_predefined_type(first.text);
    if (predefined) return can_start_expression(after) || after.is("(");
    switch (after.kind) {
      case TokenKind::identifier:
      case TokenKind::numeric_literal:
      case TokenKind::string_literal:
      case TokenKind::interpolated_string:
      case TokenKind::char_literal:
        return true;
      case TokenKind::keyword:
        return after.text != "as" && after.text != "is";
      case TokenKind::punctuation:
        return after.text == "(" || after.text == "!" || after.text == "~";
      default:
        return false;
    }
  }

  SyntaxNode parse_switch_expression(SyntaxNode governing, std::size_t start) {
    auto n = make(NodeKind::switch_expression);
    NodeBuilder::set_op(n, take());  // switch
    add(n, std::move(governing));
    take();  // {
    while (!eof() && !at("}")) {
      const auto before = pos_;
      auto arm = make(NodeKind::switch_expression_arm);
      const auto arm_start = pos_;
      add(arm, parse_pattern());
      if (at_ident("when")) {
        take();
        add(arm, parse_expression());
      }
      expect("=>");
      add(arm, parse_expression());
      close(arm, arm_start);
      add(n, std::move(arm));
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    expect("}");
    close(n, start);
    return n;
  }

  SyntaxNode parse_simple_name() {
    const auto start = pos_;
    if (!is_ident(cur())) return missing("expected identifier");
    if (peek().is("<")) {
      const auto e = scan_type_args(pos_ + 1);
      if (e && generic_follows(*e)) {
        auto n = make(NodeKind::generic_name);
        NodeBuilder::set_name(n, take());
        auto args = make(NodeKind::type_argument_list);
        const auto args_start = pos_;
        take();  // <
        while (!eof() && !at(">")) {
          const auto before = pos_;
          if (at(",")) {
            take();
            continue;
          }
          add(args, parse_type());
          if (!accept(",")) break;
          if (pos_ == before) break;
        }
        expect(">");
        close(args, args_start);
        add(n, std::move(args));
        close(n, start);
        return n;
      }
    }
    auto n = make(NodeKind::identifier_name);
    NodeBuilder::set_name(n, take());
    close(n, start);
    return n;
  }

  SyntaxNode parse_postfix(SyntaxNode expr, std::size_t start) {
    while (true) {
      DepthGuard guard(depth_);
      if (too_deep()) return expr;
      const Token& t = cur();
      if (t.is(".") || t.is("?.") || t.is("->") || t.is("::")) {
        auto n = make(NodeKind::member_access_expression);
        NodeBuilder::set_op(n, take());
        add(n, std::move(expr));
        auto name = parse_simple_name();
        NodeBuilder::set_name(n, name.name_span());
        add(n, std::move(name));
        close(n, start);
        expr = std::move(n);
      } else if (t.is("?") && peek().is("[") && adjacent(pos_, pos_ + 1)) {
        auto n = make(NodeKind::element_access_expression);
        NodeBuilder::set_op(n, take());
        add(n, std::move(expr));
        add(n, parse_argument_list("[", "]"));
        close(n, start);
        expr = std::move(n);
      } else if (t.is("(")) {
        auto n = make(NodeKind::invocation_expression);
        add(n, std::move(expr));
        add(n, parse_argument_list("(", ")"));
        close(n, start);
        expr = std::move(n);
      } else if (t.is("[")) {
        auto n = make(NodeKind::element_access_expression);
        add(n, std::move(expr));
        add(n, parse_argument_list("[", "]"));
        close(n, start);
        expr = std::move(n);
      } else if (t.is("++") || t.is("--") || t.is("!")) {
        auto n = make(NodeKind::postfix_unary_expression);
        NodeBuilder::set_op(n, take());
        add(n, std::move(expr));
        close(n, start);
        expr = std::move(n);
      } else {
        return expr;
      }
    }
  }

  SyntaxNode parse_argument_list(std::string_view open, std::string_view close_tok) {
    auto n = make(NodeKind::argument_list);
    const auto start = pos_;
    expect(open);
    while (!eof() && !at(close_tok)) {
      const auto before = pos_;
      add(n, parse_argument());
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    expect(close_tok);
    close(n, start);
    return n;
  }

  // `out var x`, `out int x`, `(var a, int b)` element designations.
  bool is_declaration_expression() const {
    const auto t = scan_type(pos_, NullableMode::always);
    if (!t || !is_ident(tok(*t))) return false;
    const Token& after = tok(*t + 1);
    return after.is(",") || after.is(")") || after.is("]");
  }

  SyntaxNode parse_declaration_expression() {
    auto n = make(NodeKind::declaration_expression);
    const auto start = pos_;
    add(n, parse_type());
    NodeBuilder::set_name(n, take());
    close(n, start);
    return n;
  }

  SyntaxNode parse_argument() {
    auto n = make(NodeKind::argument);
    const auto start = pos_;
    if (is_ident(cur()) && peek().is(":")) {
      NodeBuilder::set_name(n, take());
      take();
    }
    if (at("ref") || at("out") || at("in")) {
      NodeBuilder::set_op(n, take());
      if (at("readonly")) take();
    }
    if (!can_start_expression(cur())) {
      add(n, missing("expected expression"));
    } else if (is_declaration_expression()) {
      add(n, parse_declaration_expression());
    } else {
      add(n, parse_expression());
    }
    close(n, start);
    return n;
  }

  SyntaxNode parse_lambda() {
    auto n = make(NodeKind::lambda_expression);
    const auto start = pos_;
    while ((at_ident("async") && !peek().is("=>")) || at("static")) take();
    if (at("(")) {
      add(n, parse_parameter_list());
    } else {
      auto params = make(NodeKind::parameter_list);
      auto p = make(NodeKind::parameter);
      const auto p_start = pos_;
      NodeBuilder::set_name(p, take());
      close(p, p_start);
      add(params, std::move(p));
      close(params, p_start);
      add(n, std::move(params));
    }
    expect("=>");
    if (at("{")) {
      add(n, parse_block());
    } else {
      add(n, parse_expression());
    }
    close(n, start);
    return n;
  }

  SyntaxNode parse_primary() {
    const auto start = pos_;
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::numeric_literal:
        return single(NodeKind::numeric_literal);
      case TokenKind::string_literal:
        return single(NodeKind::string_literal);
      case TokenKind::interpolated_string:
        return single(NodeKind::interpolated_string);
      case TokenKind::char_literal:
        return single(NodeKind::char_literal);
      case TokenKind::identifier:
        return parse_identifier_primary();
      case TokenKind::keyword:
        break;
      case TokenKind::punctuation:
        if (t.text == "(") return parse_parenthesized();
        if (t.text == "[") return parse_collection();
        return missing("expected expression");
      default:
        return missing("expected expression");
    }
    const auto kw = t.text;
    if (kw == "true" || kw == "false") return single(NodeKind::boolean_literal);
    if (kw == "null") return single(NodeKind::null_literal);
    if (kw == "this") return single(NodeKind::this_expression);
    if (kw == "base") return single(NodeKind::base_expression);
    if (is_predefined_type(kw)) {
      auto n = make(NodeKind::predefined_type);
      NodeBuilder::set_name(n, take());
      close(n, start);
      return n;
    }
    if (kw == "default") {
      if (peek().is("(")) {
        auto n = make(NodeKind::default_expression);
        take();
        take();
        add(n, parse_type());
        expect(")");
        close(n, start);
        return n;
      }
      return single(NodeKind::default_literal);
    }
    if (kw == "typeof" || kw == "sizeof") {
      auto n = make(NodeKind::typeof_expression);
      take();
      expect("(");
      add(n, parse_type());
      expect(")");
      close(n, start);
      return n;
    }
    if ((kw == "checked" || kw == "unchecked") && peek().is("(")) {
      auto n = make(NodeKind::checked_expression);
      take();
      take();
      add(n, parse_expression());
      expect(")");
      close(n, start);
      return n;
    }
    if (kw == "new") return parse_new();
    if (kw == "stackalloc") {
      auto n = make(NodeKind::array_creation_expression);
      take();
      if (!at("[")) {
        auto ty = make(NodeKind::type);
        const auto ty_start = pos_;
        while (is_ident(cur()) || cur().kind == TokenKind::keyword || at(".") || at("*")) {
          take();
        }
        close(ty, ty_start);
        add(n, std::move(ty));
      }
      if (at("[")) add(n, parse_argument_list("[", "]"));
      if (at("{")) add(n, parse_initializer());
      close(n, start);
      return n;
    }
    if (kw == "delegate") {
      auto n = make(NodeKind::anonymous_method_expression);
      take();
      if (at("(")) add(n, parse_parameter_list());
      if (at("{")) {
        add(n, parse_block());
      } else {
        error_here("expected '{'");
      }
      close(n, start);
      return n;
    }
    return missing("expected expression");
  }

  SyntaxNode parse_identifier_primary() {
    const auto start = pos_;
    if (at_ident("from") && is_query_start()) return parse_query();
    if (at_ident("var") && peek().is("(")) {
      const auto close_paren = matching(pos_ + 1);
      if (close_paren && (tok(*close_paren + 1).is("=") || tok(*close_paren + 1).is("in"))) {
        auto n = make(NodeKind::declaration_expression);
        take();
        while (pos_ <= *close_paren) take();
        close(n, start);
        return n;
      }
    }
    return parse_simple_name();
  }

  bool is_query_start() const {
    // from x in ..., from T x in ...
    if (!is_ident(peek()) && !(peek().kind == TokenKind::keyword &&
                               is_predefined_type(peek().text))) {
      return false;
    }
    if (peek(2).is("in")) return true;
    const auto t = scan_type(pos_ + 1, NullableMode::always);
    return t && is_ident(tok(*t)) && tok(*t + 1).is("in");
  }

  SyntaxNode parse_query() {
    auto n = make(NodeKind::query_expression);
    const auto start = pos_;
    while (!eof()) {
      const auto before = pos_;
      if (at_ident("from") || at_ident("join")) {
        take();
        if (!peek().is("in")) {
          if (const auto t = scan_type(pos_, NullableMode::always); t && is_ident(tok(*t))) {
            add(n, parse_type());
          }
        }
        if (is_ident(cur())) take();
        expect("in");
        add(n, parse_expression());
      } else if (at_ident("let")) {
        take();
        if (is_ident(cur())) take();
        expect("=");
        add(n, parse_expression());
      } else if (at_ident("into")) {
        take();
        if (is_ident(cur())) take();
      } else if (at(",") || (is_ident(cur()) && contains(kQueryKeywords, cur().text) &&
                             !at_ident("from"))) {
        const bool bare = at_ident("ascending") || at_ident("descending");
        take();
        if (!bare && can_start_expression(cur()) &&
            !(is_ident(cur()) && contains(kQueryKeywords, cur().text))) {
          add(n, parse_expression());
        }
      } else {
        break;
      }
      if (pos_ == before) break;
    }
    close(n, start);
    return n;
  }

  SyntaxNode parse_parenthesized() {
    const auto start = pos_;
    take();  // (
    auto first = parse_tuple_element();
    if (at(",")) {
      auto n = make(NodeKind::tuple_expression);
      add(n, std::move(first));
      while (accept(",")) {
        const auto before = pos_;
        add(n, parse_tuple_element());
        if (pos_ == before) break;
      }
      expect(")");
      close(n, start);
      return n;
    }
    auto n = make(NodeKind::parenthesized_expression);
    add(n, std::move(first));
    expect(")");
    close(n, start);
    return n;
  }

  SyntaxNode parse_tuple_element() {
    if (is_ident(cur()) && peek().is(":")) {
      auto n = make(NodeKind::argument);
      const auto start = pos_;
      NodeBuilder::set_name(n, take());
      take();
      add(n, parse_expression());
      close(n, start);
      return n;
    }
    if (is_declaration_expression()) return parse_declaration_expression();
    return parse_expression();
  }

  SyntaxNode parse_collection() {
    auto n = make(NodeKind::collection_expression);
    const auto start = pos_;
    take();  // [
    while (!eof() && !at("]")) {
      const auto before = pos_;
      add(n, parse_expression());
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    expect("]");
    close(n, start);
    return n;
  }

  SyntaxNode parse_initializer() {
    auto n = make(NodeKind::initializer_expression);
    const auto start = pos_;
    take();  // {
    while (!eof() && !at("}")) {
      const auto before = pos_;
      if (at("{")) {
        add(n, parse_initializer());
      } else {
        add(n, parse_expression());
      }
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    expect("}");
    close(n, start);
    return n;
  }

  SyntaxNode parse_new() {
    const auto start = pos_;
    take();  // new
    if (at("[")) {
      auto n = make(NodeKind::array_creation_expression);
      take();
      while (accept(",")) {
      }
      expect("]");
      if (at("{")) add(n, parse_initializer());
      close(n, start);
      return n;
    }
    if (at("{")) {
      auto n = make(NodeKind::anonymous_object_creation_expression);
      add(n, parse_initializer());
      close(n, start);
      return n;
    }
    if (at("(")) {
      auto n = make(NodeKind::object_creation_expression);
      add(n, parse_argument_list("(", ")"));
      if (at("{")) add(n, parse_initializer());
      close(n, start);
      return n;
    }
    if (!scan_type(pos_, NullableMode::always)) return missing("expected type");
    auto type = parse_type();
    const bool array = at("[") || (!type.text().empty() && type.text().back() == ']');
    if (array) {
      auto n = make(NodeKind::array_creation_expression);
      add(n, std::move(type));
      if (at("[")) add(n, parse_argument_list("[", "]"));
      while (at("[")) {
        take();
        while (accept(",")) {
        }
        expect("]");
      }
      if (at("{")) add(n, parse_initializer());
      close(n, start);
      return n;
    }
    auto n = make(NodeKind::object_creation_expression);
    add(n, std::move(type));
    if (at("(")) add(n, parse_argument_list("(", ")"));
    if (at("{")) add(n, parse_initializer());
    close(n, start);
    return n;
  }

  // -------------------------------------------------------------- patterns

  SyntaxNode parse_pattern() {
    DepthGuard guard(depth_);
    if (too_deep()) {
      if (eof()) return missing("nesting too deep");
      return skip_one("nesting too deep");
    }
    return parse_pattern_combinator("or", [this] {
      return parse_pattern_combinator("and", [this] { return parse_pattern_not(); });
    });
  }

  template <typename Next>
  SyntaxNode parse_pattern_combinator(std::string_view word, Next next) {
    const auto start = pos_;
    auto left = next();
    while (at_ident(word)) {
      auto n = make(NodeKind::pattern);
      NodeBuilder::set_op(n, take());
      add(n, std::move(left));
      add(n, next());
      close(n, start);
      left = std::move(n);
    }
    return left;
  }

  SyntaxNode parse_pattern_not() {
    if (at_ident("not") && !peek().is("=>") && !peek().is(":") && !peek().is(")")) {
      DepthGuard guard(depth_);
      if (too_deep()) return skip_one("nesting too deep");
      auto n = make(NodeKind::pattern);
      const auto start = pos_;
      NodeBuilder::set_op(n, take());
      add(n, parse_pattern_not());
      close(n, start);
      return n;
    }
    return parse_primary_pattern();
  }

  void parse_designation(SyntaxNode& n) {
    if (is_ident(cur()) && !at_ident("and") && !at_ident("or") && !at_ident("when")) {
      NodeBuilder::set_name(n, take());
    }
  }

  void parse_subpatterns(SyntaxNode& n, std::string_view close_tok) {
    take();  // ( { [
    while (!eof() && !at(close_tok)) {
      const auto before = pos_;
      if (close_tok != "]" && is_ident(cur())) {
        // name:  or  a.b.c:
        std::size_t p = pos_;
        while (is_ident(tok(p)) && tok(p + 1).is(".")) p += 2;
        if (is_ident(tok(p)) && tok(p + 1).is(":")) {
          while (pos_ <= p + 1) take();
        }
      }
      if (at("..")) {
        auto slice = make(NodeKind::pattern);
        const auto s_start = pos_;
        NodeBuilder::set_op(slice, take());
        if (!at(",") && !at(close_tok)) add(slice, parse_pattern());
        close(slice, s_start);
        add(n, std::move(slice));
      } else {
        add(n, parse_pattern());
      }
      if (!accept(",")) break;
      if (pos_ == before) break;
    }
    expect(close_tok);
  }

  SyntaxNode parse_primary_pattern() {
    const auto start = pos_;
    const Token& t = cur();
    if (t.is("(") || t.is("{") || t.is("[")) {
      auto n = make(NodeKind::pattern);
      parse_subpatterns(n, t.is("(") ? ")" : t.is("{") ? "}" : "]");
      if (at("{")) parse_subpatterns(n, "}");
      parse_designation(n);
      close(n, start);
      return n;
    }
    if (t.is("<") || t.is("<=") || t.is(">") || t.is(">=") || t.is("==") || t.is("!=")) {
      auto n = make(NodeKind::pattern);
      NodeBuilder::set_op(n, take());
      add(n, parse_binary(9));
      close(n, start);
      return n;
    }
    if (t.is_identifier("var") && (is_ident(peek()) || peek().is("("))) {
      auto n = make(NodeKind::pattern);
      take();
      if (at("(")) {
        skip_balanced();
      } else {
        NodeBuilder::set_name(n, take());
      }
      close(n, start);
      return n;
    }
    if (const auto end = scan_type(pos_, NullableMode::pattern)) {
      const Token& after = tok(*end);
      const bool designation = is_ident(after) && after.text != "and" &&
                               after.text != "or" && after.text != "when";
      const Token& last = tok(*end - 1);
      const bool type_only_syntax = last.is("]") || last.is("?") || last.is("*") ||
                                    (t.kind == TokenKind::keyword && is_predefined_type(t.text) &&
                                     !tok(pos_ + 1).is("."));
      if (designation || after.is("{") || (after.is("(") && !t.is("(")) || type_only_syntax) {
        auto n = make(NodeKind::pattern);
        add(n, parse_pattern_type());
        if (at("(")) parse_subpatterns(n, ")");
        if (at("{")) parse_subpatterns(n, "}");
        parse_designation(n);
        close(n, start);
        return n;
      }
    }
    auto n = make(NodeKind::pattern);
    add(n, parse_binary(9));
    close(n, start);
    return n;
  }

  const SourceFile& file_;
  std::string_view src_;
  std::vector<Token>& toks_;
  std::vector<ParseDiagnostic>& diags_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

ParseResult parse_file(std::shared_ptr<const SourceFile> file) {
  std::vector<ParseDiagnostic> diags;
  if (!file->is_valid_utf8()) {
    diags.push_back(ParseDiagnostic{file->path(), Span{0, 0}, "file is not valid UTF-8",
                                    Severity::error});
    SyntaxNode root(NodeKind::compilation_unit, file->text());
    std::vector<Token> tokens{Token{TokenKind::end_of_file, Span{0, 0}, {}}};
    return ParseResult{SyntaxTree(std::move(file), std::move(tokens), std::move(root)),
                       std::move(diags)};
  }
  auto tokens = lex(*file, &diags);
  std::vector<ParseDiagnostic> parse_diags;
  Parser parser(*file, tokens, parse_diags);
  auto root = parser.parse_compilation_unit();
  diags.insert(diags.end(), parse_diags.begin(), parse_diags.end());
  std::stable_sort(diags.begin(), diags.end(), [](const auto& a, const auto& b) {
    return a.span.begin < b.span.begin;
  });
  return ParseResult{SyntaxTree(std::move(file), std::move(tokens), std::move(root)),
                     std::move(diags)};
}

ParseResult parse_file(SourceFile file) {
  return parse_file(std::make_shared<const SourceFile>(std::move(file)));
}

ParseResult parse_text(std::string_view text, std::string path) {
  return parse_file(SourceFile(std::move(path), std::string(text)));
}

}  // namespace xnose::syntax
