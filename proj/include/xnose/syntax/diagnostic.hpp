#pragma once

#include <string>

#include "xnose/syntax/source_file.hpp"

namespace xnose::syntax {

enum class Severity { error, warning };

struct ParseDiagnostic {
  std::string path;
  Span span;
  std::string message;
  Severity severity = Severity::error;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

constexpr const char* to_string(Severity s) noexcept {
  return s == Severity::error ? "error" : "warning";
}

}  // namespace xnose::syntax
