#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xnose/model/config.hpp"
#include "xnose/syntax/source_file.hpp"

namespace xnose::detect {

enum class SmellKind {
  LackOfCohesion,
  EmptyTest,
  ConditionalTestSmell,
  AssertionRoulette,
  UnknownTest,
  RedundantPrint,
  SleepyTest,
  IgnoredTest,
  RedundantAssertion,
  DuplicateAssert,
  MagicNumber,
  EagerTest,
  InappropriateAssertion,
  SensitiveEquality,
  ConstructorInitialization,
  ObscureInLineSetup,
};

inline constexpr std::size_t kSmellKindCount = 16;

/// The 16 built-in kinds in their canonical (table) order.
const std::array<SmellKind, kSmellKindCount>& all_smell_kinds() noexcept;

std::string_view to_string(SmellKind kind) noexcept;
std::optional<SmellKind> smell_kind_from_string(std::string_view name) noexcept;

enum class Granularity { test_case, test_suite };

std::string_view to_string(Granularity g) noexcept;
Granularity granularity_of(SmellKind kind) noexcept;

struct SmellFinding {
  std::string kind;  // canonical name; user-registered kinds use their own
  Granularity granularity = Granularity::test_case;
  std::string file;
  std::string suite;
  std::optional<std::string> case_name;  // absent for suite-level findings
  syntax::Span span;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string evidence;

  friend bool operator==(const SmellFinding&, const SmellFinding&) = default;
};

/// Canonical order: file path, span start, kind name, then suite and case.
bool finding_less(const SmellFinding& a, const SmellFinding& b);

struct DetectorConfig {
  model::ModelConfig model;
  long obscure_setup_threshold = 10;
  long eager_test_threshold = 1;
  double cohesion_threshold = 0.4;
  bool magic_number_deep = false;
  std::vector<std::string> magic_number_allowlist{"0", "1"};
  std::string duplicate_assert_compare = "normalized_text";

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const DetectorConfig& cfg);

/// A problem inside the tool itself (a detector that threw), as opposed to a
/// parse diagnostic about the analyzed source.
struct ToolDiagnostic {
  std::string file;
  std::string message;

  friend bool operator==(const ToolDiagnostic&, const ToolDiagnostic&) = default;
};

}  // namespace xnose::detect
