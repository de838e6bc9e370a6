#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

#include "support/helpers.hpp"
#include "xnose/syntax/parser.hpp"
#include "xnose/syntax/query.hpp"

namespace xnose::syntax {
namespace {

using xnose::testing::read_file;

std::size_t error_count(const ParseResult& r) {
  std::size_t n = 0;
  for (const auto& d : r.diagnostics) n += d.severity == Severity::error;
  return n;
}

const SyntaxNode* first(const SyntaxNode& root, NodeKind k) {
  const auto found = find_descendants(root, {k});
  return found.empty() ? nullptr : found.front();
}

TEST(SourceFile, LineColumnsAreOneBased) {
  SourceFile f("a.cs", "ab\ncd\n\nx");
  EXPECT_EQ(f.location(0), (LineCol{1, 1}));
  EXPECT_EQ(f.location(1), (LineCol{1, 2}));
  EXPECT_EQ(f.location(3), (LineCol{2, 1}));
  EXPECT_EQ(f.location(7), (LineCol{4, 1}));
}

TEST(SourceFile, StripsByteOrderMark) {
  SourceFile f("a.cs", "\xEF\xBB\xBF" "class A { }");
  EXPECT_EQ(f.text(), "class A { }");
}

TEST(SourceFile, Utf8Validation) {
  EXPECT_TRUE(is_valid_utf8("caf\xC3\xA9"));
  EXPECT_FALSE(is_valid_utf8("\xC3"));
  EXPECT_FALSE(is_valid_utf8("\xFF\xFE"));
  EXPECT_FALSE(is_valid_utf8("\xC0\x80"));  // overlong
}

TEST(Lexer, CommentsAndPreprocessorAreTrivia) {
  SourceFile f("a.cs", "#if DEBUG\nx /* c */ + // d\n y\n#endif\n");
  const auto toks = lex(f);
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_EQ(toks[0].text, "x");
  EXPECT_EQ(toks[1].text, "+");
  EXPECT_EQ(toks[2].text, "y");
  EXPECT_EQ(toks[3].kind, TokenKind::end_of_file);
}

TEST(Lexer, StringForms) {
  SourceFile f("a.cs", R"cs(@"a""b" $"x{y}z" $@"{q}" "e\"s" 'c' """raw""")cs");
  const auto toks = lex(f);
  ASSERT_EQ(toks.size(), 7u);
  EXPECT_EQ(toks[0].kind, TokenKind::string_literal);
  EXPECT_EQ(toks[1].kind, TokenKind::interpolated_string);
  EXPECT_EQ(toks[2].kind, TokenKind::interpolated_string);
  EXPECT_EQ(toks[3].kind, TokenKind::string_literal);
  EXPECT_EQ(toks[4].kind, TokenKind::char_literal);
  EXPECT_EQ(toks[5].kind, TokenKind::string_literal);
}

TEST(Lexer, StrayBytesBecomeBadTokens) {
  SourceFile f("a.cs", "a ` b");
  std::vector<ParseDiagnostic> diags;
  const auto toks = lex(f, &diags);
  EXPECT_EQ(toks[1].kind, TokenKind::bad);
  EXPECT_EQ(diags.size(), 1u);
}

TEST(Parse, MinimalClass) {
  const auto r = parse_text("class A { }");
  EXPECT_TRUE(r.diagnostics.empty());
  const auto& root = r.tree.root();
  EXPECT_TRUE(root.is(NodeKind::compilation_unit));
  ASSERT_EQ(root.children().size(), 1u);
  EXPECT_TRUE(root.children()[0].is(NodeKind::class_declaration));
  EXPECT_EQ(root.children()[0].name(), "A");
}

TEST(Parse, EmptyInput) {
  const auto r = parse_text("");
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_TRUE(r.tree.root().is(NodeKind::compilation_unit));
  EXPECT_TRUE(r.tree.root().children().empty());
}

TEST(Parse, UnclosedParameterListRecovers) {
  const auto r = parse_text("class A { void M( }");
  EXPECT_GE(error_count(r), 1u);
  const auto classes = find_descendants(r.tree.root(), {NodeKind::class_declaration});
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0]->name(), "A");
}

TEST(Parse, InvalidUtf8GivesEmptyTreeAndOneDiagnostic) {
  const auto r = parse_text("class A { \xFF }");
  EXPECT_EQ(r.diagnostics.size(), 1u);
  EXPECT_TRUE(r.tree.root().children().empty());
}

TEST(Parse, IsDeterministic) {
  const std::string text = "class A { void M( } } } namespace N { class B { int x = ; } }";
  const auto a = parse_text(text);
  const auto b = parse_text(text);
  EXPECT_EQ(a.diagnostics, b.diagnostics);
  std::vector<std::pair<NodeKind, Span>> na, nb;
  walk_descendants(a.tree.root(), [&](const SyntaxNode& n) {
    na.emplace_back(n.kind(), n.span());
    return true;
  });
  walk_descendants(b.tree.root(), [&](const SyntaxNode& n) {
    nb.emplace_back(n.kind(), n.span());
    return true;
  });
  EXPECT_EQ(na, nb);
}

TEST(Parse, MemberAccessAndInvocation) {
  const auto r = parse_text("class A { void M() { x?.Foo<int>(1, b: 2); } }");
  EXPECT_TRUE(r.diagnostics.empty());
  const auto* inv = first(r.tree.root(), NodeKind::invocation_expression);
  ASSERT_NE(inv, nullptr);
  const auto& callee = inv->children()[0];
  ASSERT_TRUE(callee.is(NodeKind::member_access_expression));
  EXPECT_EQ(callee.op(), "?.");
  EXPECT_EQ(callee.name(), "Foo");
  const auto* args = inv->child(NodeKind::argument_list);
  ASSERT_NE(args, nullptr);
  EXPECT_EQ(args->children().size(), 2u);
}

TEST(Parse, ModernSyntaxParsesCleanly) {
  const std::string text = R"cs(
    namespace N;
    public record Point(int X, int Y);
    file sealed class C<T> : Base<T>, IDisposable where T : class, new() {
      private readonly List<int> _xs = [1, 2, 3];
      public int P { get; init; } = 3;
      public event EventHandler E;
      int this[int i] => _xs[i];
      public static C<T> operator +(C<T> a, C<T> b) => a;
      async Task M(int? n, params string[] rest) {
        var (a, b) = (1, 2);
        if (n is > 0 and < 10 or null) { }
        var s = n switch { 1 => "a", > 5 => "b", _ => "c" };
        var q = from x in _xs where x > 1 select x * 2;
        using var d = new Disposable();
        await foreach (var item in Stream()) { }
        int Local(int v) => v << 2 >> 1;
        var y = _xs?[0] ?? default;
        var f = (int z) => z * 2;
        var p2 = new Point(1, 2) with { X = 3 };
        Span<int> sp = stackalloc int[4];
        Action act = delegate { };
        lock (this) { }
        checked { y++; }
        goto done;
        done: ;
      }
    })cs";
  const auto r = parse_text(text);
  for (const auto& d : r.diagnostics) ADD_FAILURE() << d.message << " at " << d.span.begin;
  EXPECT_EQ(find_descendants(r.tree.root(), {NodeKind::local_function_statement}).size(), 1u);
  EXPECT_EQ(find_descendants(r.tree.root(), {NodeKind::switch_expression}).size(), 1u);
}

TEST(Query, FindClassDeclarations) {
  const auto r = parse_text("class A { }");
  EXPECT_EQ(find_descendants(r.tree.root(), {NodeKind::class_declaration}).size(), 1u);
}

TEST(Query, EmptyKindSetFindsNothing) {
  const auto r = parse_text("class A { void M() { if (x) { } } }");
  EXPECT_TRUE(find_descendants(r.tree.root(), {}).empty());
}

TEST(Query, FindsIfInsideLocalFunction) {
  const auto r = parse_text(R"cs(
    using Xunit;
    class T {
      [Fact]
      public void M() {
        void Check(int v) {
          if (v > 0) { Assert.True(true); }
        }
        Check(1);
      }
    })cs");
  EXPECT_TRUE(r.diagnostics.empty());
  const auto ifs = find_descendants(r.tree.root(), {NodeKind::if_statement});
  ASSERT_EQ(ifs.size(), 1u);
  EXPECT_NE(ifs[0]->text().find("v > 0"), std::string_view::npos);
}

TEST(Query, DescendantsComeInSourceOrder) {
  const auto r = parse_text("class A { void M() { a(); { b(); } c(); } }");
  const auto calls = find_descendants(r.tree.root(), {NodeKind::invocation_expression});
  ASSERT_EQ(calls.size(), 3u);
  EXPECT_LT(calls[0]->span().begin, calls[1]->span().begin);
  EXPECT_LT(calls[1]->span().begin, calls[2]->span().begin);
}

std::vector<AttributeUse> method_attributes(const std::string& attrs) {
  static std::vector<ParseResult> keep;  // nodes view into the tree
  keep.push_back(parse_text("class T { " + attrs + " void M() { } }"));
  const auto* m = first(keep.back().tree.root(), NodeKind::method_declaration);
  EXPECT_NE(m, nullptr);
  return m == nullptr ? std::vector<AttributeUse>{} : attribute_names(*m);
}

TEST(Attributes, Fact) {
  const auto a = method_attributes("[Fact]");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].name, "Fact");
  EXPECT_TRUE(a[0].named_arguments.empty());
}

TEST(Attributes, SkipNamedArgument) {
  const auto a = method_attributes("[Fact(Skip = \"slow\")]");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].name, "Fact");
  const std::vector<std::pair<std::string, std::string>> expected{{"Skip", "\"slow\""}};
  EXPECT_EQ(a[0].named_arguments, expected);
}

TEST(Attributes, QualifiedWithSuffix) {
  const auto a = method_attributes("[Xunit.TheoryAttribute]");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].name, "Theory");
}

TEST(Attributes, SeveralListsAndTargets) {
  const auto a = method_attributes("[Theory, InlineData(1)] [method: Trait(\"a\", \"b\")]");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].name, "Theory");
  EXPECT_EQ(a[1].name, "InlineData");
  EXPECT_EQ(a[2].name, "Trait");
}

TEST(Attributes, SimpleName) {
  EXPECT_EQ(simple_attribute_name("Xunit.FactAttribute"), "Fact");
  EXPECT_EQ(simple_attribute_name("global::Xunit.Fact"), "Fact");
  EXPECT_EQ(simple_attribute_name("Generic<int>"), "Generic");
  EXPECT_EQ(simple_attribute_name("Attribute"), "Attribute");
  EXPECT_EQ(simple_attribute_name("Xunit // c\n . /* d */ FactAttribute"), "Fact");
}

TEST(Attributes, WrongNodeKindIsALogicError) {
  const auto r = parse_text("class T { int x; }");
  const auto* f = first(r.tree.root(), NodeKind::field_declaration);
  ASSERT_NE(f, nullptr);
  EXPECT_THROW(attribute_names(*f), std::logic_error);
}

std::size_t statement_count(const std::string& method) {
  const auto r = parse_text("class T { " + method + " }");
  const auto* m = first(r.tree.root(), NodeKind::method_declaration);
  if (m == nullptr) return 999;
  const SyntaxNode* body = m->child(NodeKind::block);
  if (body == nullptr) body = m->child(NodeKind::arrow_expression_clause);
  return body == nullptr ? 999 : enclosing_statements(*body).size();
}

TEST(EnclosingStatements, EmptyBlock) { EXPECT_EQ(statement_count("void M() { }"), 0u); }

TEST(EnclosingStatements, CommentOnlyBlock) {
  EXPECT_EQ(statement_count("void M() { /* x */ }"), 0u);
}

TEST(EnclosingStatements, ExpressionBody) {
  EXPECT_EQ(statement_count("void M() => Assert.True(x);"), 1u);
}

TEST(EnclosingStatements, TopLevelOnly) {
  EXPECT_EQ(statement_count("void M() { a(); if (x) { b(); c(); } d(); }"), 3u);
}

TEST(NormalizedText, IgnoresLayoutAndComments) {
  const auto a = parse_text("class T { void M() { Assert.Equal(1,x); } }");
  const auto b = parse_text("class T {\n void M() {\n Assert.Equal( 1 ,/*c*/ x ) ; } }");
  const auto* ia = first(a.tree.root(), NodeKind::invocation_expression);
  const auto* ib = first(b.tree.root(), NodeKind::invocation_expression);
  ASSERT_TRUE(ia && ib);
  EXPECT_EQ(normalized_text(a.tree, ia->span()), "Assert . Equal ( 1 , x )");
  EXPECT_EQ(normalized_text(a.tree, ia->span()), normalized_text(b.tree, ib->span()));
}

// Every child lies inside its parent, siblings do not overlap, and every
// node's text is the slice of the source at its span.
void check_tree_shape(const SyntaxTree& tree) {
  const auto text = tree.file().text();
  std::function<void(const SyntaxNode&)> visit = [&](const SyntaxNode& n) {
    ASSERT_LE(n.span().begin, n.span().end);
    ASSERT_LE(n.span().end, text.size());
    EXPECT_EQ(n.text(), text.substr(n.span().begin, n.span().length()));
    if (!n.name_span().empty()) EXPECT_TRUE(n.span().contains(n.name_span()));
    std::size_t prev_end = n.span().begin;
    for (const auto& c : n.children()) {
      EXPECT_TRUE(n.span().contains(c.span()))
          << to_string(c.kind()) << " escapes " << to_string(n.kind());
      EXPECT_GE(c.span().begin, prev_end) << "overlapping siblings in " << to_string(n.kind());
      prev_end = c.span().end;
      visit(c);
    }
  };
  visit(tree.root());
}

TEST(Property, CorpusTreesAreWellFormed) {
  const std::filesystem::path dir = XNOSE_FIXTURES_DIR "/corpus";
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.path().extension() != ".cs") continue;
    ++files;
    const auto r = parse_text(read_file(e.path()), e.path().string());
    EXPECT_EQ(error_count(r), 0u) << e.path();
    check_tree_shape(r.tree);
  }
  EXPECT_GE(files, 48u);
}

TEST(Property, RandomBytesNeverCrashTheParser) {
  std::mt19937 rng(7);
  const std::string alphabet = "class{}()[];,.=<>?:!&|+-*/\"'@$#\n abcxyz0123456789_";
  for (int i = 0; i < 2000; ++i) {
    std::uniform_int_distribution<std::size_t> len(0, 200), ch(0, alphabet.size() - 1);
    std::string text;
    const auto n = len(rng);
    for (std::size_t k = 0; k < n; ++k) text.push_back(alphabet[ch(rng)]);
    const auto r = parse_text(text);
    check_tree_shape(r.tree);
  }
}

TEST(Property, TruncatedCorpusFilesNeverCrash) {
  const std::filesystem::path dir = XNOSE_FIXTURES_DIR "/corpus";
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".cs") continue;
    const auto text = read_file(e.path());
    for (std::size_t cut = 0; cut < text.size(); cut += 37) {
      const auto r = parse_text(text.substr(0, cut));
      check_tree_shape(r.tree);
    }
  }
}

}  // namespace
}  // namespace xnose::syntax
