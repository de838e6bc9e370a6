#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "xnose/detect/smell.hpp"
#include "xnose/report/report.hpp"

namespace xnose::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::string format = "json";  // json | text
  std::optional<std::string> out;
  bool fail_on_smell = false;
  unsigned jobs = 0;  // 0: one per hardware thread

  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

struct CliConfig {
  detect::DetectorConfig detectors;  // includes the model lists
  OutputOptions output;

  friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

/// Parses the small TOML subset the config file uses: `[section]` headers,
/// `key = value` with strings, integers, floats, booleans and (possibly
/// multi-line) arrays, and `#` comments. The result is
/// {section: {key: value}}.
report::Json parse_toml_subset(std::string_view text, const std::string& origin = "<config>");

/// Overlays a {model, detectors, output} document on `cfg`. Unknown
/// sections or keys and ill-typed values throw ConfigError.
void apply_config(const report::Json& doc, CliConfig& cfg, const std::string& origin = "<config>");

/// Defaults overlaid with `path`; `.json` files are read as JSON, anything
/// else as the TOML subset.
CliConfig load_config(const std::filesystem::path& path);

unsigned effective_jobs(unsigned requested);

}  // namespace xnose::cli
