#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "xnose/syntax/token.hpp"

namespace xnose::syntax {

namespace {

constexpr std::array<std::string_view, 77> kKeywords = {
    "abstract", "as",       "base",      "bool",     "break",    "byte",
    "case",     "catch",    "char",      "checked",  "class",    "const",
    "continue", "decimal",  "default",   "delegate", "do",       "double",
    "else",     "enum",     "event",     "explicit", "extern",   "false",
    "finally",  "fixed",    "float",     "for",      "foreach",  "goto",
    "if",       "implicit", "in",        "int",      "interface", "internal",
    "is",       "lock",     "long",      "namespace", "new",     "null",
    "object",   "operator", "out",       "override", "params",   "private",
    "protected", "public",  "readonly",  "ref",      "return",   "sbyte",
    "sealed",   "short",    "sizeof",    "stackalloc", "static", "string",
    "struct",   "switch",   "this",      "throw",    "true",     "try",
    "typeof",   "uint",     "ulong",     "unchecked", "unsafe",  "ushort",
    "using",    "virtual",  "void",      "volatile", "while",
};

constexpr std::array<std::string_view, 16> kPredefinedTypes = {
    "bool",  "byte",  "char",   "decimal", "double", "float",
    "int",   "long",  "object", "sbyte",   "short",  "string",
    "uint",  "ulong", "ushort", "void",
};

// Longest first within each length class.
constexpr std::array<std::string_view, 25> kMultiCharPunctuation = {
    "<<=", "?\?=", "<<", "<=", ">=", "==", "!=", "&&", "||",
    "++",  "--",  "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=",  "=>",  "??", "?.", "::", "->", "..",
};

constexpr std::string_view kSingleCharPunctuation = "{}[]().,:;+-*/%&|^!~=<>?";

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

class Lexer {
 public:
  Lexer(const SourceFile& file, std::vector<ParseDiagnostic>* diags)
      : file_(file), src_(file.text()), diags_(diags) {}

  std::vector<Token> run() {
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      lex_one();
    }
    out_.push_back(Token{TokenKind::end_of_file, Span{src_.size(), src_.size()}, {}});
    return std::move(out_);
  }

 private:
  char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }
  unsigned char uat(std::size_t i) const { return static_cast<unsigned char>(at(i)); }

  void error(std::size_t begin, std::size_t end, std::string message) {
    if (diags_ == nullptr) return;
    diags_->push_back(ParseDiagnostic{file_.path(), Span{begin, end}, std::move(message),
                                      Severity::error});
  }

  void emit(TokenKind kind, std::size_t begin) {
    out_.push_back(Token{kind, Span{begin, pos_}, src_.substr(begin, pos_ - begin)});
    line_start_ = false;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++pos_;
        line_start_ = true;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
        ++pos_;
      } else if (c == '/' && at(pos_ + 1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && at(pos_ + 1) == '*') {
        const auto begin = pos_;
        const auto close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) {
          pos_ = src_.size();
          error(begin, pos_, "unterminated block comment");
        } else {
          pos_ = close + 2;
        }
      } else if (c == '#' && line_start_) {
        // Preprocessor directives are trivia; every branch is lexed as-is.
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  void lex_one() {
    const auto begin = pos_;
    const char c = src_[pos_];

    if (c == '@' && at(pos_ + 1) == '"') {
      ++pos_;
      scan_verbatim_string();
      emit(TokenKind::string_literal, begin);
      return;
    }
    if (c == '@' && at(pos_ + 1) == '$' && at(pos_ + 2) == '"') {
      pos_ += 2;
      scan_interpolated(1, /*verbatim=*/true);
      emit(TokenKind::interpolated_string, begin);
      return;
    }
    if (c == '@' && is_ident_start(uat(pos_ + 1))) {
      ++pos_;
      while (pos_ < src_.size() && is_ident_part(uat(pos_))) ++pos_;
      emit(TokenKind::identifier, begin);
      return;
    }
    if (c == '$') {
      std::size_t p = pos_;
      while (at(p) == '$') ++p;
      const auto dollars = p - pos_;
      bool verbatim = false;
      if (at(p) == '@') {
        verbatim = true;
        ++p;
      }
      if (at(p) == '"') {
        pos_ = p;
        scan_interpolated(dollars, verbatim);
        emit(TokenKind::interpolated_string, begin);
        return;
      }
    }
    if (c == '"') {
      if (at(pos_ + 1) == '"' && at(pos_ + 2) == '"') {
        scan_raw_string(0);
      } else {
        scan_regular_string();
      }
      scan_utf8_suffix();
      emit(TokenKind::string_literal, begin);
      return;
    }
    if (c == '\'') {
      scan_char();
      emit(TokenKind::char_literal, begin);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(uat(pos_ + 1)))) {
      scan_number();
      emit(TokenKind::numeric_literal, begin);
      return;
    }
    if (is_ident_start(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && is_ident_part(uat(pos_))) ++pos_;
      const auto word = src_.substr(begin, pos_ - begin);
      emit(is_keyword(word) ? TokenKind::keyword : TokenKind::identifier, begin);
      return;
    }
    for (const auto p : kMultiCharPunctuation) {
      if (src_.substr(pos_).starts_with(p)) {
        // `a?.5:b` is a conditional, not a null-conditional access.
        if (p == "?." && std::isdigit(uat(pos_ + 2))) continue;
        pos_ += p.size();
        emit(TokenKind::punctuation, begin);
        return;
      }
    }
    if (kSingleCharPunctuation.find(c) != std::string_view::npos) {
      ++pos_;
      emit(TokenKind::punctuation, begin);
      return;
    }
    // Consume a whole UTF-8 sequence so bad tokens stay on code point borders.
    ++pos_;
    while (pos_ < src_.size() && (uat(pos_) & 0xC0) == 0x80) ++pos_;
    emit(TokenKind::bad, begin);
    error(begin, pos_, "unexpected character");
  }

  void scan_utf8_suffix() {
    if ((at(pos_) == 'u' || at(pos_) == 'U') && at(pos_ + 1) == '8') pos_ += 2;
  }

  void scan_regular_string() {
    const auto begin = pos_;
    ++pos_;  // opening quote
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
      } else if (c == '"') {
        ++pos_;
        return;
      } else if (c == '\n') {
        break;
      } else {
        ++pos_;
      }
    }
    pos_ = std::min(pos_, src_.size());
    error(begin, pos_, "unterminated string literal");
  }

  void scan_verbatim_string() {
    const auto begin = pos_;
    ++pos_;
    while (pos_ < src_.size()) {
      if (src_[pos_] == '"') {
        if (at(pos_ + 1) == '"') {
          pos_ += 2;
          continue;
        }
        ++pos_;
        return;
      }
      ++pos_;
    }
    error(begin, pos_, "unterminated verbatim string literal");
  }

  // Raw string literal: three or more quotes, closed by the same number.
  // With `dollars` > 0 interpolation holes open with that many braces.
  void scan_raw_string(std::size_t dollars) {
    const auto begin = pos_;
    std::size_t quotes = 0;
    while (at(pos_) == '"') {
      ++quotes;
      ++pos_;
    }
    while (pos_ < src_.size()) {
      if (src_[pos_] == '"') {
        std::size_t run = 0;
        while (at(pos_ + run) == '"') ++run;
        pos_ += run;
        if (run >= quotes) return;
        continue;
      }
      if (dollars > 0 && src_[pos_] == '{') {
        std::size_t run = 0;
        while (at(pos_ + run) == '{') ++run;
        if (run >= dollars) {
          pos_ += run;
          scan_hole(dollars);
        } else {
          pos_ += run;
        }
        continue;
      }
      ++pos_;
    }
    error(begin, pos_, "unterminated raw string literal");
  }

  void scan_interpolated(std::size_t dollars, bool verbatim) {
    const auto begin = pos_;
    if (at(pos_ + 1) == '"' && at(pos_ + 2) == '"') {
      scan_raw_string(dollars);
      return;
    }
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (!verbatim && c == '\\') {
        pos_ += 2;
      } else if (c == '"') {
        if (verbatim && at(pos_ + 1) == '"') {
          pos_ += 2;
          continue;
        }
        ++pos_;
        return;
      } else if (c == '{') {
        if (at(pos_ + 1) == '{') {
          pos_ += 2;
          continue;
        }
        ++pos_;
        scan_hole(1);
      } else if (c == '\n' && !verbatim) {
        break;
      } else {
        ++pos_;
      }
    }
    pos_ = std::min(pos_, src_.size());
    error(begin, pos_, "unterminated interpolated string");
  }

  // Skips an interpolation hole body up to and including its closing braces.
  void scan_hole(std::size_t closing_braces) {
    int depth = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '"' || (c == '@' && at(pos_ + 1) == '"')) {
        if (c == '@') {
          ++pos_;
          scan_verbatim_string();
        } else if (at(pos_ + 1) == '"' && at(pos_ + 2) == '"') {
          scan_raw_string(0);
        } else {
          scan_regular_string();
        }
      } else if (c == '$') {
        std::size_t p = pos_;
        while (at(p) == '$') ++p;
        const auto dollars = p - pos_;
        bool verbatim = false;
        if (at(p) == '@') {
          verbatim = true;
          ++p;
        }
        if (at(p) == '"') {
          pos_ = p;
          scan_interpolated(dollars, verbatim);
        } else {
          pos_ = p;
        }
      } else if (c == '\'') {
        scan_char();
      } else if (c == '(' || c == '[' || c == '{') {
        ++depth;
        ++pos_;
      } else if (c == ')' || c == ']') {
        --depth;
        ++pos_;
      } else if (c == '}') {
        if (depth <= 0) {
          std::size_t run = 0;
          while (run < closing_braces && at(pos_ + run) == '}') ++run;
          pos_ += run;
          return;
        }
        --depth;
        ++pos_;
      } else if (c == ':' && depth <= 0 && at(pos_ + 1) != ':') {
        // Format specifier runs to the closing brace.
        while (pos_ < src_.size() && src_[pos_] != '}' && src_[pos_] != '"') ++pos_;
      } else {
        ++pos_;
      }
    }
  }

  void scan_char() {
    const auto begin = pos_;
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
      } else if (c == '\'') {
        ++pos_;
        return;
      } else if (c == '\n') {
        break;
      } else {
        ++pos_;
      }
    }
    pos_ = std::min(pos_, src_.size());
    error(begin, pos_, "unterminated character literal");
  }

  void scan_number() {
    auto digits = [&](auto pred) {
      while (pos_ < src_.size() && (pred(uat(pos_)) || src_[pos_] == '_')) ++pos_;
    };
    auto dec = [](unsigned char c) { return std::isdigit(c) != 0; };
    if (at(pos_) == '0' && (at(pos_ + 1) == 'x' || at(pos_ + 1) == 'X')) {
      pos_ += 2;
      digits([](unsigned char c) { return std::isxdigit(c) != 0; });
    } else if (at(pos_) == '0' && (at(pos_ + 1) == 'b' || at(pos_ + 1) == 'B')) {
      pos_ += 2;
      digits([](unsigned char c) { return c == '0' || c == '1'; });
    } else {
      digits(dec);
      if (at(pos_) == '.' && std::isdigit(uat(pos_ + 1))) {
        ++pos_;
        digits(dec);
      }
      if ((at(pos_) == 'e' || at(pos_) == 'E') &&
          (std::isdigit(uat(pos_ + 1)) ||
           ((at(pos_ + 1) == '+' || at(pos_ + 1) == '-') && std::isdigit(uat(pos_ + 2))))) {
        pos_ += 2;
        digits(dec);
      }
    }
    for (int i = 0; i < 2; ++i) {
      const char c = at(pos_);
      if (std::string_view("uUlLfFdDmM").find(c) != std::string_view::npos && c != '\0') {
        ++pos_;
      }
    }
  }

  const SourceFile& file_;
  std::string_view src_;
  std::vector<ParseDiagnostic>* diags_;
  std::vector<Token> out_;
  std::size_t pos_ = 0;
  bool line_start_ = true;
};

}  // namespace

bool is_keyword(std::string_view word) noexcept {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_predefined_type(std::string_view word) noexcept {
  return std::find(kPredefinedTypes.begin(), kPredefinedTypes.end(), word) !=
         kPredefinedTypes.end();
}

std::vector<Token> lex(const SourceFile& file, std::vector<ParseDiagnostic>* diagnostics) {
  return Lexer(file, diagnostics).run();
}

}  // namespace xnose::syntax
