#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xnose/syntax/diagnostic.hpp"
#include "xnose/syntax/source_file.hpp"
#include "xnose/syntax/token.hpp"

namespace xnose::syntax {

// The subset of C# the analysis needs. Everything else parses into one of
// the generic kinds (type, pattern, generic_member, error).
enum class NodeKind {
  compilation_unit,
  using_directive,
  namespace_declaration,
  class_declaration,
  struct_declaration,
  interface_declaration,
  record_declaration,
  enum_declaration,
  delegate_declaration,
  method_declaration,
  constructor_declaration,
  destructor_declaration,
  field_declaration,
  property_declaration,
  generic_member,
  attribute_list,
  attribute,
  attribute_argument,
  base_list,
  type_parameter_list,
  parameter_list,
  parameter,
  block,
  arrow_expression_clause,

  local_declaration_statement,
  variable_declaration,
  variable_declarator,
  local_function_statement,
  expression_statement,
  if_statement,
  else_clause,
  for_statement,
  foreach_statement,
  while_statement,
  do_statement,
  switch_statement,
  switch_section,
  case_label,
  return_statement,
  throw_statement,
  try_statement,
  catch_clause,
  finally_clause,
  using_statement,
  lock_statement,
  fixed_statement,
  checked_statement,
  unsafe_statement,
  break_statement,
  continue_statement,
  goto_statement,
  yield_statement,
  labeled_statement,
  empty_statement,

  invocation_expression,
  argument_list,
  argument,
  member_access_expression,
  element_access_expression,
  identifier_name,
  generic_name,
  type_argument_list,
  predefined_type,
  numeric_literal,
  string_literal,
  interpolated_string,
  char_literal,
  boolean_literal,
  null_literal,
  default_literal,
  this_expression,
  base_expression,
  binary_expression,
  assignment_expression,
  prefix_unary_expression,
  postfix_unary_expression,
  conditional_expression,
  switch_expression,
  switch_expression_arm,
  lambda_expression,
  anonymous_method_expression,
  parenthesized_expression,
  tuple_expression,
  cast_expression,
  object_creation_expression,
  array_creation_expression,
  anonymous_object_creation_expression,
  initializer_expression,
  collection_expression,
  is_pattern_expression,
  await_expression,
  typeof_expression,
  default_expression,
  checked_expression,
  throw_expression,
  range_expression,
  declaration_expression,
  query_expression,
  ref_expression,
  with_expression,
  type,
  pattern,
  error,
};

std::string_view to_string(NodeKind kind) noexcept;

/// Immutable concrete-syntax node. `span` covers every token the node
/// consumed; `name_span` is the declared or referenced name where one
/// exists (method name, member name, identifier) and `op_span` the operator
/// token of unary, binary and assignment expressions.
class SyntaxNode {
 public:
  SyntaxNode() = default;
  SyntaxNode(NodeKind kind, std::string_view source) : kind_(kind), source_(source) {}

  NodeKind kind() const noexcept { return kind_; }
  Span span() const noexcept { return span_; }
  Span name_span() const noexcept { return name_span_; }
  Span op_span() const noexcept { return op_span_; }
  std::span<const SyntaxNode> children() const noexcept { return children_; }

  std::string_view text() const noexcept { return slice(span_); }
  std::string_view name() const noexcept { return slice(name_span_); }
  std::string_view op() const noexcept { return slice(op_span_); }

  bool is(NodeKind k) const noexcept { return kind_ == k; }

  /// First child of the given kind, or nullptr.
  const SyntaxNode* child(NodeKind k) const noexcept;

 private:
  friend class NodeBuilder;

  std::string_view slice(Span s) const noexcept {
    if (s.end > source_.size() || s.begin > s.end) return {};
    return source_.substr(s.begin, s.length());
  }

  NodeKind kind_ = NodeKind::error;
  std::string_view source_;
  Span span_;
  Span name_span_;
  Span op_span_;
  std::vector<SyntaxNode> children_;
};

/// Mutable construction handle used by the parser.
class NodeBuilder {
 public:
  static void set_span(SyntaxNode& n, Span s) { n.span_ = s; }
  static void set_name(SyntaxNode& n, Span s) { n.name_span_ = s; }
  static void set_op(SyntaxNode& n, Span s) { n.op_span_ = s; }
  static void set_kind(SyntaxNode& n, NodeKind k) { n.kind_ = k; }
  static std::vector<SyntaxNode>& children(SyntaxNode& n) { return n.children_; }
};

/// A parsed file: the source, its token stream and the root node. Nodes
/// view into the source buffer, which the tree keeps alive.
class SyntaxTree {
 public:
  SyntaxTree() = default;
  SyntaxTree(std::shared_ptr<const SourceFile> file, std::vector<Token> tokens,
             SyntaxNode root)
      : file_(std::move(file)), tokens_(std::move(tokens)), root_(std::move(root)) {}

  const SourceFile& file() const noexcept { return *file_; }
  const std::shared_ptr<const SourceFile>& file_ptr() const noexcept { return file_; }
  const SyntaxNode& root() const noexcept { return root_; }
  std::span<const Token> tokens() const noexcept { return tokens_; }

  /// Tokens lying entirely within `span` (end-of-file excluded).
  std::span<const Token> tokens_in(Span span) const;

 private:
  std::shared_ptr<const SourceFile> file_;
  std::vector<Token> tokens_;
  SyntaxNode root_;
};

struct ParseResult {
  SyntaxTree tree;
  std::vector<ParseDiagnostic> diagnostics;
};

}  // namespace xnose::syntax
