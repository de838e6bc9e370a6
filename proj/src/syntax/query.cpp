#include "xnose/syntax/query.hpp"

#include <cctype>

#include <algorithm>
#include <array>
#include <stdexcept>

namespace xnose::syntax {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kKindNames = {
    "compilation-unit",
    "using-directive",
    "namespace-declaration",
    "class-declaration",
    "struct-declaration",
    "interface-declaration",
    "record-declaration",
    "enum-declaration",
    "delegate-declaration",
    "method-declaration",
    "constructor-declaration",
    "destructor-declaration",
    "field-declaration",
    "property-declaration",
    "generic-member",
    "attribute-list",
    "attribute",
    "attribute-argument",
    "base-list",
    "type-parameter-list",
    "parameter-list",
    "parameter",
    "block",
    "arrow-expression-clause",
    "local-declaration-statement",
    "variable-declaration",
    "variable-declarator",
    "local-function-statement",
    "expression-statement",
    "if-statement",
    "else-clause",
    "for-statement",
    "foreach-statement",
    "while-statement",
    "do-statement",
    "switch-statement",
    "switch-section",
    "case-label",
    "return-statement",
    "throw-statement",
    "try-statement",
    "catch-clause",
    "finally-clause",
    "using-statement",
    "lock-statement",
    "fixed-statement",
    "checked-statement",
    "unsafe-statement",
    "break-statement",
    "continue-statement",
    "goto-statement",
    "yield-statement",
    "labeled-statement",
    "empty-statement",
    "invocation-expression",
    "argument-list",
    "argument",
    "member-access-expression",
    "element-access-expression",
    "identifier-name",
    "generic-name",
    "type-argument-list",
    "predefined-type",
    "numeric-literal",
    "string-literal",
    "interpolated-string",
    "char-literal",
    "boolean-literal",
    "null-literal",
    "default-literal",
    "this-expression",
    "base-expression",
    "binary-expression",
    "assignment-expression",
    "prefix-unary-expression",
    "postfix-unary-expression",
    "conditional-expression",
    "switch-expression",
    "switch-expression-arm",
    "lambda-expression",
    "anonymous-method-expression",
    "parenthesized-expression",
    "tuple-expression",
    "cast-expression",
    "object-creation-expression",
    "array-creation-expression",
    "anonymous-object-creation-expression",
    "initializer-expression",
    "collection-expression",
    "is-pattern-expression",
    "await-expression",
    "typeof-expression",
    "default-expression",
    "checked-expression",
    "throw-expression",
    "range-expression",
    "declaration-expression",
    "query-expression",
    "ref-expression",
    "with-expression",
    "type",
    "pattern",
    "error",
};

void collect(const SyntaxNode& node, const KindSet& kinds,
             std::vector<const SyntaxNode*>& out) {
  for (const auto& child : node.children()) {
    if (kinds.contains(child.kind())) out.push_back(&child);
    collect(child, kinds, out);
  }
}

bool walk(const SyntaxNode& node, const std::function<bool(const SyntaxNode&)>& visit) {
  for (const auto& child : node.children()) {
    if (visit(child)) walk(child, visit);
  }
  return true;
}

}  // namespace

std::string_view to_string(NodeKind kind) noexcept {
  return kKindNames[static_cast<std::size_t>(kind)];
}

const SyntaxNode* SyntaxNode::child(NodeKind k) const noexcept {
  for (const auto& c : children_) {
    if (c.kind() == k) return &c;
  }
  return nullptr;
}

std::span<const Token> SyntaxTree::tokens_in(Span span) const {
  if (tokens_.empty()) return {};
  // The final token is end_of_file; never include it.
  const auto last = tokens_.end() - 1;
  auto first = std::lower_bound(tokens_.begin(), last, span.begin,
                                [](const Token& t, std::size_t off) { return t.span.begin < off; });
  auto end = std::lower_bound(first, last, span.end,
                              [](const Token& t, std::size_t off) { return t.span.end <= off; });
  return {first, end};
}

std::vector<const SyntaxNode*> find_descendants(const SyntaxNode& node, const KindSet& kinds) {
  std::vector<const SyntaxNode*> out;
  if (kinds.empty()) return out;
  collect(node, kinds, out);
  return out;
}

void walk_descendants(const SyntaxNode& node,
                      const std::function<bool(const SyntaxNode&)>& visit) {
  walk(node, visit);
}

std::string simple_attribute_name(std::string_view written) {
  // A qualified name may carry comments and line breaks between its parts.
  std::string name;
  for (std::size_t i = 0; i < written.size();) {
    if (written.substr(i, 2) == "//") {
      const auto nl = written.find('\n', i);
      i = nl == std::string_view::npos ? written.size() : nl;
    } else if (written.substr(i, 2) == "/*") {
      const auto close = written.find("*/", i + 2);
      i = close == std::string_view::npos ? written.size() : close + 2;
    } else if (std::isspace(static_cast<unsigned char>(written[i]))) {
      ++i;
    } else {
      name.push_back(written[i++]);
    }
  }
  if (const auto lt = name.find('<'); lt != std::string::npos) name.erase(lt);
  if (const auto dot = name.find_last_of(".:"); dot != std::string::npos) name.erase(0, dot + 1);
  if (!name.empty() && name.front() == '@') name.erase(0, 1);
  constexpr std::string_view suffix = "Attribute";
  if (name.size() > suffix.size() && name.ends_with(suffix)) {
    name.erase(name.size() - suffix.size());
  }
  return name;
}

std::vector<AttributeUse> attribute_names(const SyntaxNode& decl) {
  switch (decl.kind()) {
    case NodeKind::class_declaration:
    case NodeKind::struct_declaration:
    case NodeKind::record_declaration:
    case NodeKind::interface_declaration:
    case NodeKind::method_declaration:
      break;
    default:
      throw std::logic_error("attribute_names: expected a type or method declaration, got " +
                             std::string(to_string(decl.kind())));
  }
  std::vector<AttributeUse> out;
  for (const auto& list : decl.children()) {
    if (!list.is(NodeKind::attribute_list)) continue;
    for (const auto& attr : list.children()) {
      if (!attr.is(NodeKind::attribute)) continue;
      AttributeUse use{simple_attribute_name(attr.name()), {}, attr.span()};
      if (const auto* args = attr.child(NodeKind::argument_list)) {
        for (const auto& arg : args->children()) {
          if (!arg.is(NodeKind::attribute_argument) || arg.name().empty()) continue;
          const auto value = arg.children().empty() ? std::string_view{}
                                                    : arg.children().front().text();
          use.named_arguments.emplace_back(std::string(arg.name()), std::string(value));
        }
      }
      out.push_back(std::move(use));
    }
  }
  return out;
}

std::vector<const SyntaxNode*> enclosing_statements(const SyntaxNode& body) {
  std::vector<const SyntaxNode*> out;
  if (body.is(NodeKind::arrow_expression_clause)) {
    if (!body.children().empty()) out.push_back(&body.children().front());
    return out;
  }
  for (const auto& child : body.children()) {
    // `;` and local function declarations execute nothing on their own.
    if (child.is(NodeKind::empty_statement) || child.is(NodeKind::local_function_statement)) {
      continue;
    }
    if (child.is(NodeKind::error) && child.span().empty()) continue;
    out.push_back(&child);
  }
  return out;
}

std::string normalized_text(const SyntaxTree& tree, Span span) {
  std::string out;
  for (const auto& token : tree.tokens_in(span)) {
    if (!out.empty()) out.push_back(' ');
    out.append(token.text);
  }
  return out;
}

}  // namespace xnose::syntax
