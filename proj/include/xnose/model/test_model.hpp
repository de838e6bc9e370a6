#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xnose/model/config.hpp"
#include "xnose/syntax/parser.hpp"
#include "xnose/syntax/syntax_node.hpp"

namespace xnose::model {

using syntax::Span;
using syntax::SyntaxNode;
using syntax::SyntaxTree;

enum class InvocationClass { assertion, act, framework, local_helper, output, sleep };

std::string_view to_string(InvocationClass c) noexcept;

struct InvocationInfo {
  std::string callee;        // simple name, generic arguments stripped
  std::string receiver;      // compact text of the receiver; empty for bare calls
  std::string full_text;     // compact text of the whole invocation
  Span span;
  InvocationClass classification = InvocationClass::act;
  const SyntaxNode* node = nullptr;
};

struct AssertionCall {
  std::string method;
  std::string receiver_text;
  std::vector<const SyntaxNode*> arguments;  // argument expressions
  std::string normalized_text;
  bool is_documented = false;
  Span span;
  const SyntaxNode* node = nullptr;
};

enum class TestKind { fact, theory };

struct TestCase {
  std::string name;
  std::string suite_name;
  Span span;
  Span name_span;
  TestKind kind = TestKind::fact;
  std::optional<std::string> skip_reason;  // literal text as written
  Span skip_span;
  const SyntaxNode* declaration = nullptr;
  const SyntaxNode* body = nullptr;  // block, arrow clause, or null
  std::vector<const SyntaxNode*> statements;
  std::vector<AssertionCall> assertions;
  std::vector<const SyntaxNode*> local_declarations;
  std::size_t local_declaration_count = 0;
  std::vector<InvocationInfo> invocations;
  const SyntaxTree* tree = nullptr;
};

struct TestSuite {
  std::string name;
  std::string file;
  Span span;
  Span name_span;
  std::vector<TestCase> cases;
  bool has_explicit_constructor = false;
  std::size_t constructor_statement_count = 0;
  Span constructor_span;
  std::vector<std::string> base_list_names;
  std::set<std::string> helper_methods;
  const SyntaxNode* declaration = nullptr;
  const SyntaxTree* tree = nullptr;
};

struct TestFile {
  std::string path;
  std::shared_ptr<const SyntaxTree> tree;
  std::vector<syntax::ParseDiagnostic> diagnostics;
  std::vector<TestSuite> suites;
};

struct SkippedFile {
  std::string path;
  std::string reason;

  friend bool operator==(const SkippedFile&, const SkippedFile&) = default;
};

struct TestProject {
  std::string root;
  std::vector<TestFile> files;
  std::vector<SkippedFile> skipped_files;

  std::size_t suite_count() const;
  std::size_t case_count() const;
};

/// Classifies one invocation-expression node. `local_names` are the names
/// of methods declared in the enclosing suite plus local functions of the
/// case; bare calls to them are local helpers.
InvocationInfo classify_invocation(const SyntaxNode& invocation, const SyntaxTree& tree,
                                   const std::set<std::string>& local_names,
                                   const ModelConfig& cfg);

/// Assertion-classified invocations of a case, in source order.
std::vector<AssertionCall> extract_assertions(const TestCase& test_case);

/// Test suites declared in one parsed file.
std::vector<TestSuite> extract_suites(const SyntaxTree& tree, const ModelConfig& cfg);

struct ParsedFile {
  std::shared_ptr<const SyntaxTree> tree;
  std::vector<syntax::ParseDiagnostic> diagnostics;
};

/// Assembles a project from parsed files. Files without any suite are
/// recorded as skipped (not-a-test-file). Files are ordered by path.
TestProject build_test_model(std::vector<ParsedFile> files, const ModelConfig& cfg,
                             std::string root = {});

/// Token texts of `span`, with a space only between two word-like tokens:
/// `new Foo()`, `sut.Run(1,2)`.
std::string compact_text(const SyntaxTree& tree, Span span);

}  // namespace xnose::model
