#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xnose::syntax {

/// Half-open byte range [begin, end) within a source file.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  constexpr std::size_t length() const noexcept { return end - begin; }
  constexpr bool empty() const noexcept { return begin == end; }
  constexpr bool contains(const Span& other) const noexcept {
    return begin <= other.begin && other.end <= end;
  }
  friend constexpr bool operator==(const Span&, const Span&) = default;
};

/// 1-based line and byte column.
struct LineCol {
  std::size_t line = 1;
  std::size_t column = 1;
  friend constexpr bool operator==(const LineCol&, const LineCol&) = default;
};

/// One C# source file held in memory. A leading UTF-8 byte order mark is
/// stripped; everything else is kept byte for byte.
class SourceFile {
 public:
  SourceFile() = default;
  SourceFile(std::string path, std::string text);

  /// Reads the file at `path`. Throws std::system_error when it cannot be
  /// opened or read.
  static SourceFile read(const std::filesystem::path& path,
                         std::string display_path = {});

  const std::string& path() const noexcept { return path_; }
  std::string_view text() const noexcept { return text_; }
  std::string_view slice(Span span) const;

  LineCol location(std::size_t offset) const;
  bool is_valid_utf8() const noexcept { return valid_utf8_; }

 private:
  std::string path_;
  std::string text_;
  std::vector<std::size_t> line_starts_;
  bool valid_utf8_ = true;
};

bool is_valid_utf8(std::string_view bytes) noexcept;

}  // namespace xnose::syntax
