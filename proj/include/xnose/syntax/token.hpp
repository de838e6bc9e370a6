#pragma once

#include <string_view>
#include <vector>

#include "xnose/syntax/diagnostic.hpp"
#include "xnose/syntax/source_file.hpp"

namespace xnose::syntax {

enum class TokenKind {
  identifier,
  keyword,
  numeric_literal,
  string_literal,
  interpolated_string,
  char_literal,
  punctuation,
  bad,
  end_of_file,
};

struct Token {
  TokenKind kind = TokenKind::end_of_file;
  Span span;
  std::string_view text;

  bool is(std::string_view t) const noexcept {
    return (kind == TokenKind::punctuation || kind == TokenKind::keyword) &&
           text == t;
  }
  bool is_identifier(std::string_view t) const noexcept {
    return kind == TokenKind::identifier && text == t;
  }
};

bool is_keyword(std::string_view word) noexcept;
bool is_predefined_type(std::string_view word) noexcept;

/// Splits C# source into tokens. Comments, whitespace and preprocessor
/// lines are trivia and never become tokens. The final token is always
/// end_of_file. Lexing is total: bytes that start no token become `bad`
/// tokens and a diagnostic.
std::vector<Token> lex(const SourceFile& file,
                       std::vector<ParseDiagnostic>* diagnostics = nullptr);

}  // namespace xnose::syntax
