#pragma once

#include <bitset>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "xnose/syntax/syntax_node.hpp"

namespace xnose::syntax {

inline constexpr std::size_t kNodeKindCount = static_cast<std::size_t>(NodeKind::error) + 1;

class KindSet {
 public:
  KindSet() = default;
  KindSet(std::initializer_list<NodeKind> kinds) {
    for (auto k : kinds) bits_.set(static_cast<std::size_t>(k));
  }
  bool contains(NodeKind k) const { return bits_.test(static_cast<std::size_t>(k)); }
  bool empty() const { return bits_.none(); }

 private:
  std::bitset<kNodeKindCount> bits_;
};

/// All descendants of `node` (excluding `node`) whose kind is in `kinds`,
/// in source order (pre-order).
std::vector<const SyntaxNode*> find_descendants(const SyntaxNode& node, const KindSet& kinds);

/// Pre-order walk over descendants. Returning false from `visit` skips the
/// subtree below that node.
void walk_descendants(const SyntaxNode& node,
                      const std::function<bool(const SyntaxNode&)>& visit);

struct AttributeUse {
  std::string name;
  std::vector<std::pair<std::string, std::string>> named_arguments;
  Span span;

  friend bool operator==(const AttributeUse& a, const AttributeUse& b) {
    return a.name == b.name && a.named_arguments == b.named_arguments;
  }
};

/// Strips namespace qualifiers, generic arguments and the `Attribute`
/// suffix: `Xunit.FactAttribute` becomes `Fact`.
std::string simple_attribute_name(std::string_view written);

/// Attributes on a class or method declaration. Throws std::logic_error
/// for any other node kind.
std::vector<AttributeUse> attribute_names(const SyntaxNode& decl);

/// Top-level executable statements of a method body. A block yields its
/// statements; an expression body (`=> expr`) yields exactly one node.
std::vector<const SyntaxNode*> enclosing_statements(const SyntaxNode& body);

/// Token texts within `span` joined by single spaces. Comments and
/// whitespace never affect the result.
std::string normalized_text(const SyntaxTree& tree, Span span);

}  // namespace xnose::syntax
