#include "xnose/model/discovery.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <system_error>

#include "xnose/parallel.hpp"
#include "xnose/syntax/parser.hpp"

namespace xnose::model {

namespace fs = std::filesystem;

namespace {

std::string relative_name(const fs::path& file, const fs::path& base) {
  std::error_code ec;
  auto rel = fs::relative(file, base, ec);
  if (ec || rel.empty()) rel = file.filename();
  return rel.generic_string();
}

bool has_cs_extension(const fs::path& p) { return p.extension() == ".cs"; }

std::optional<std::string> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return std::move(ss).str();
}

}  // namespace

bool looks_like_test_source(std::string_view text) {
  static const std::regex pattern(
      R"((^|\n)\s*(global\s+)?using\s+(static\s+)?Xunit\b|[\[,]\s*(Xunit\.)?(Fact|Theory)(Attribute)?\b)");
  return std::regex_search(text.begin(), text.end(), pattern);
}

Discovery discover_test_files(const fs::path& root, const ModelConfig&) {
  std::error_code ec;
  const auto status = fs::status(root, ec);
  if (ec || !fs::exists(status)) {
    throw DiscoveryError("cannot access '" + root.string() + "'");
  }

  Discovery out;
  std::vector<fs::path> candidates;
  if (fs::is_regular_file(status)) {
    out.base = root.parent_path();
    candidates.push_back(root);
  } else if (fs::is_directory(status)) {
    out.base = root;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw DiscoveryError("cannot read directory '" + root.string() + "'");
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) break;
      if (it->is_regular_file(ec) && has_cs_extension(it->path())) candidates.push_back(it->path());
    }
  } else {
    throw DiscoveryError("'" + root.string() + "' is neither a file nor a directory");
  }

  for (const auto& path : candidates) {
    const auto name = relative_name(path, out.base);
    const auto bytes = read_bytes(path);
    if (!bytes) {
      out.skipped.push_back({name, "unreadable"});
    } else if (!looks_like_test_source(*bytes)) {
      out.skipped.push_back({name, "not-a-test-file"});
    } else {
      out.files.push_back(name);
    }
  }
  std::sort(out.files.begin(), out.files.end());
  std::sort(out.skipped.begin(), out.skipped.end(),
            [](const SkippedFile& a, const SkippedFile& b) { return a.path < b.path; });
  return out;
}

TestProject load_project(const fs::path& root, const ModelConfig& cfg, unsigned jobs) {
  auto found = discover_test_files(root, cfg);

  struct Slot {
    std::optional<TestFile> file;
    std::optional<SkippedFile> skipped;
  };
  std::vector<Slot> slots(found.files.size());
  parallel_for(found.files.size(), jobs, [&](std::size_t i) {
    const auto& name = found.files[i];
    auto bytes = read_bytes(found.base / fs::path(name));
    if (!bytes) {
      slots[i].skipped = SkippedFile{name, "unreadable"};
      return;
    }
    auto source = std::make_shared<const syntax::SourceFile>(name, std::move(*bytes));
    if (!source->is_valid_utf8()) {
      slots[i].skipped = SkippedFile{name, "invalid-utf8"};
      return;
    }
    auto parsed = syntax::parse_file(source);
    std::vector<ParsedFile> one;
    one.push_back({std::make_shared<const SyntaxTree>(std::move(parsed.tree)),
                   std::move(parsed.diagnostics)});
    auto project = build_test_model(std::move(one), cfg);
    if (!project.skipped_files.empty()) slots[i].skipped = project.skipped_files.front();
    if (!project.files.empty()) slots[i].file = std::move(project.files.front());
  });

  TestProject project;
  project.root = root.generic_string();
  project.skipped_files = std::move(found.skipped);
  for (auto& slot : slots) {
    if (slot.file) project.files.push_back(std::move(*slot.file));
    if (slot.skipped) project.skipped_files.push_back(std::move(*slot.skipped));
  }
  std::sort(project.skipped_files.begin(), project.skipped_files.end(),
            [](const SkippedFile& a, const SkippedFile& b) { return a.path < b.path; });
  return project;
}

}  // namespace xnose::model
