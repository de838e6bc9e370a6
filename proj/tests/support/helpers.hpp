#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xnose/detect/detectors.hpp"
#include "xnose/model/test_model.hpp"
#include "xnose/syntax/parser.hpp"
#include "xnose/syntax/token.hpp"

namespace xnose::testing {

inline model::TestProject project_from(
    const std::vector<std::pair<std::string, std::string>>& files,
    const model::ModelConfig& cfg = {}) {
  std::vector<model::ParsedFile> parsed;
  for (const auto& [path, text] : files) {
    auto src = std::make_shared<const syntax::SourceFile>(path, text);
    auto r = syntax::parse_file(src);
    parsed.push_back({std::make_shared<const syntax::SyntaxTree>(std::move(r.tree)),
                      std::move(r.diagnostics)});
  }
  return model::build_test_model(std::move(parsed), cfg, "mem");
}

inline model::TestProject project_from(const std::string& text,
                                       const model::ModelConfig& cfg = {}) {
  return project_from({{"T.cs", text}}, cfg);
}

/// A one-case suite `T.M` around `body`.
inline std::string wrap_case(const std::string& body, const std::string& attribute = "[Fact]") {
  return "using Xunit;\nclass T {\n  " + attribute + "\n  public void M() {\n" + body +
         "\n  }\n  void Helper() { }\n}\n";
}

/// Kinds found for the single case/suite in `text`.
inline std::set<std::string> kinds_in(const std::string& text,
                                      const detect::DetectorConfig& cfg = {}) {
  const auto project = project_from(text, cfg.model);
  const auto result = detect::detect_all(project, detect::DetectorRegistry::builtin(), cfg);
  std::set<std::string> out;
  for (const auto& f : result.findings) out.insert(f.kind);
  return out;
}

inline std::set<std::string> body_kinds(const std::string& body,
                                        const detect::DetectorConfig& cfg = {}) {
  return kinds_in(wrap_case(body), cfg);
}

using FindingKey = std::tuple<std::string, std::string, std::string, std::string, std::string>;

/// Everything about a finding except where it is.
inline std::set<FindingKey> finding_keys(const std::vector<detect::SmellFinding>& findings) {
  std::set<FindingKey> out;
  for (const auto& f : findings) {
    out.emplace(f.file, f.suite, f.case_name.value_or(""), f.kind, f.evidence);
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

/// Rewrites the layout of a C# file: every gap between tokens becomes random
/// whitespace and comments, and original comments are dropped. Tokens that
/// touch and are both punctuation stay touching (`>` `>` is a shift).
inline std::string mutate_layout(const std::string& text, std::mt19937& rng) {
  static const char* const kGaps[] = {" ",       "\n",           "\n\n      ", "\t",
                                      "   ",     " /* note */ ", " // note\n", "\r\n  ",
                                      "\n/**/\n"};
  const syntax::SourceFile file("mutate.cs", text);
  const auto tokens = syntax::lex(file, nullptr);
  std::string out;
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kGaps) - 1);
  std::size_t prev_end = 0;
  const syntax::Token* prev = nullptr;
  for (const auto& t : tokens) {
    if (t.kind == syntax::TokenKind::end_of_file) break;
    if (prev != nullptr) {
      const bool touching = t.span.begin == prev_end;
      const bool glued = touching && prev->kind == syntax::TokenKind::punctuation &&
                         t.kind == syntax::TokenKind::punctuation;
      if (!glued) out += kGaps[pick(rng)];
    } else {
      out += kGaps[pick(rng)];
    }
    out.append(t.text);
    prev_end = t.span.end;
    prev = &t;
  }
  out += "\n";
  return out;
}

/// Random method bodies built from statement fragments, some of them
/// deliberately malformed.
class BodyGenerator {
 public:
  explicit BodyGenerator(unsigned seed) : rng_(seed) {}

  std::string next() {
    std::uniform_int_distribution<int> count(0, 6);
    std::string body;
    const int n = count(rng_);
    for (int i = 0; i < n; ++i) body += fragment(0) + "\n";
    return body;
  }

 private:
  std::string fragment(int depth) {
    static const char* const kLeaves[] = {
        "",
        "// just a comment",
        "/* block comment */",
        ";",
        "var x = 1;",
        "int a = 2, b = 3;",
        "sut.Run();",
        "Helper();",
        "Assert.True(flag);",
        "Assert.Equal(5, result);",
        "Assert.True(a == b, \"msg\");",
        "var ex = Record.Exception(() => sut.Stop());",
        "Console.WriteLine(x);",
        "Thread.Sleep(10);",
        "await Task.Delay(1);",
        "Assert.Equal(x, x);",
        "Assert.Equal(\"1\", x.ToString());",
        "void Local() { }",
        "void LocalAssert() => Assert.NotNull(sut);",
        "x = y ? 1 : 2;",
        "var s = kind switch { 1 => \"a\", _ => \"b\" };",
        "sut.Run(",
        "Assert.True(",
        "}{",
        "var = ;",
        "#if DEBUG",
        "#endif",
        "@\"verbatim\";",
        "$\"{x}\";",
    };
    std::uniform_int_distribution<int> kind(0, depth > 2 ? 0 : 4);
    switch (kind(rng_)) {
      case 1:
        return "if (cond) { " + fragment(depth + 1) + " } else { " + fragment(depth + 1) + " }";
      case 2:
        return "{ " + fragment(depth + 1) + " " + fragment(depth + 1) + " }";
      case 3:
        return "for (var i = 0; i < n; i++) { " + fragment(depth + 1) + " }";
      case 4:
        return "sut.Invoke(() => { " + fragment(depth + 1) + " });";
      default: {
        std::uniform_int_distribution<std::size_t> leaf(0, std::size(kLeaves) - 1);
        return kLeaves[leaf(rng_)];
      }
    }
  }

  std::mt19937 rng_;
};

}  // namespace xnose::testing
