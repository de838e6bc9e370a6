#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xnose::model {

/// A (receiver, callee) pair such as `Thread.Sleep`. An empty receiver
/// matches bare calls like `nameof(x)`.
struct CallPattern {
  std::string receiver;
  std::string callee;

  /// Parses "Receiver.Callee" (split at the last dot) or "Callee".
  static CallPattern parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const CallPattern&, const CallPattern&) = default;
};

struct ModelConfig {
  std::vector<std::string> assertion_receivers{"Assert", "Record"};
  std::vector<CallPattern> sleep_calls{{"Thread", "Sleep"}, {"Task", "Delay"}};
  std::vector<CallPattern> output_calls{
      {"Console", "Write"}, {"Console", "WriteLine"}, {"Debug", "Write"},
      {"Debug", "WriteLine"}, {"Debug", "Print"},    {"Trace", "Write"},
      {"Trace", "WriteLine"},
  };
  std::vector<CallPattern> framework_calls{
      {"", "nameof"},
      {"Task", "FromResult"},
      {"Task", "WhenAll"},
      {"TimeSpan", "FromMilliseconds"},
      {"TimeSpan", "FromSeconds"},
      {"Guid", "NewGuid"},
  };

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace xnose::model
