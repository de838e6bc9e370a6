#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xnose/detect/detectors.hpp"
#include "xnose/model/test_model.hpp"

namespace xnose::report {

using Json = nlohmann::ordered_json;
using detect::SmellFinding;

inline constexpr std::string_view kToolName = "xnose";
inline constexpr std::string_view kToolVersion = "1.0.0";

struct SuiteEntry {
  std::string name;
  std::size_t cases = 0;
  friend bool operator==(const SuiteEntry&, const SuiteEntry&) = default;
};

struct FileEntry {
  std::string path;
  std::vector<SuiteEntry> suites;
  friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

struct SkippedEntry {
  std::string file;
  std::string reason;
  friend bool operator==(const SkippedEntry&, const SkippedEntry&) = default;
};

struct ReportDiagnostic {
  std::string source;    // "parse" or "tool"
  std::string severity;  // "error" or "warning"
  std::string file;
  std::size_t line = 0;  // 0 when not tied to a location
  std::size_t column = 0;
  std::string message;
  friend bool operator==(const ReportDiagnostic&, const ReportDiagnostic&) = default;
};

struct ProjectReport {
  std::string tool{kToolName};
  std::string version{kToolVersion};
  Json config = Json::object();
  std::string project;
  std::size_t suites = 0;
  std::size_t cases = 0;
  std::vector<SmellFinding> findings;
  std::vector<std::pair<std::string, std::size_t>> totals;  // canonical kinds first
  std::vector<ReportDiagnostic> diagnostics;
  std::vector<FileEntry> files;  // suite inventory, smelly or not
  std::vector<SkippedEntry> skipped;

  friend bool operator==(const ProjectReport&, const ProjectReport&) = default;
};

/// `extra_kinds` lists user-registered kinds so they get a totals entry even
/// when nothing was found.
ProjectReport aggregate(const model::TestProject& project, const detect::DetectionResult& result,
                        Json config = Json::object(),
                        const std::vector<std::string>& extra_kinds = {});

/// Effective configuration, in the shape the config file uses.
Json config_to_json(const detect::DetectorConfig& cfg);

/// A JSON document that does not match the expected schema. `pointer` is a
/// JSON pointer to the offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("document root") : pointer) + ": " +
                           message),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

Json to_json(const ProjectReport& report);
ProjectReport report_from_json(const Json& j);

/// Canonical serialization: two-space indent, fixed key order, LF endings,
/// trailing newline.
std::string dump_canonical(const Json& j);

/// Rounds to 6 fractional digits for output.
double round6(double x);

/// One line per finding: `file:line:col kind suite.case evidence`.
std::string format_findings_text(const ProjectReport& report);

/// Reads and parses a JSON file. Throws SchemaError("", ...) on I/O or
/// syntax errors.
Json read_json_file(const std::string& path);

}  // namespace xnose::report
