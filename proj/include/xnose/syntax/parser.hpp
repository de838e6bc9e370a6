#pragma once

#include <memory>

#include "xnose/syntax/source_file.hpp"
#include "xnose/syntax/syntax_node.hpp"

namespace xnose::syntax {

/// Parses one C# file into a concrete-syntax tree. Parsing is total: it
/// never throws on malformed input. Regions the grammar cannot represent
/// become `error` nodes and error diagnostics. A file that is not valid
/// UTF-8 yields an empty compilation unit and a single diagnostic.
ParseResult parse_file(std::shared_ptr<const SourceFile> file);
ParseResult parse_file(SourceFile file);

/// Convenience for tests and tools: parse a string as `path`.
ParseResult parse_text(std::string_view text, std::string path = "<memory>");

}  // namespace xnose::syntax
