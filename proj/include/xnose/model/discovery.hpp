#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xnose/model/config.hpp"
#include "xnose/model/test_model.hpp"

namespace xnose::model {

/// The scan root is missing or unreadable.
class DiscoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Discovery {
  std::filesystem::path base;  // directory that file paths are relative to
  std::vector<std::string> files;  // relative, '/'-separated, sorted
  std::vector<SkippedFile> skipped;
};

/// Cheap textual pre-filter: a `using Xunit` directive or a Fact/Theory
/// attribute somewhere in the text.
bool looks_like_test_source(std::string_view text);

/// Every `.cs` file under `root` that passes the pre-filter. `root` may
/// also name a single file.
Discovery discover_test_files(const std::filesystem::path& root, const ModelConfig& cfg);

/// Discovery, parsing and model extraction. Files are processed on up to
/// `jobs` threads; the result does not depend on `jobs`.
TestProject load_project(const std::filesystem::path& root, const ModelConfig& cfg,
                         unsigned jobs = 1);

}  // namespace xnose::model
