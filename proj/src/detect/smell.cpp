#include "xnose/detect/smell.hpp"

#include <stdexcept>
#include <tuple>

namespace xnose::detect {

namespace {

constexpr std::array<std::string_view, kSmellKindCount> kNames{
    "LackOfCohesion",         "EmptyTest",         "ConditionalTestSmell",
    "AssertionRoulette",      "UnknownTest",       "RedundantPrint",
    "SleepyTest",             "IgnoredTest",       "RedundantAssertion",
    "DuplicateAssert",        "MagicNumber",       "EagerTest",
    "InappropriateAssertion", "SensitiveEquality", "ConstructorInitialization",
    "ObscureInLineSetup",
};

}  // namespace

const std::array<SmellKind, kSmellKindCount>& all_smell_kinds() noexcept {
  static const auto kinds = [] {
    std::array<SmellKind, kSmellKindCount> out{};
    for (std::size_t i = 0; i < kSmellKindCount; ++i) out[i] = static_cast<SmellKind>(i);
    return out;
  }();
  return kinds;
}

std::string_view to_string(SmellKind kind) noexcept {
  return kNames[static_cast<std::size_t>(kind)];
}

std::optional<SmellKind> smell_kind_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kSmellKindCount; ++i) {
    if (kNames[i] == name) return static_cast<SmellKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Granularity g) noexcept {
  return g == Granularity::test_suite ? "suite" : "case";
}

Granularity granularity_of(SmellKind kind) noexcept {
  return kind == SmellKind::LackOfCohesion || kind == SmellKind::ConstructorInitialization
             ? Granularity::test_suite
             : Granularity::test_case;
}

bool finding_less(const SmellFinding& a, const SmellFinding& b) {
  return std::tie(a.file, a.span.begin, a.kind, a.suite, a.case_name) <
         std::tie(b.file, b.span.begin, b.kind, b.suite, b.case_name);
}

void validate(const DetectorConfig& cfg) {
  if (cfg.obscure_setup_threshold < 0) {
    throw std::invalid_argument("obscure_setup_threshold must be non-negative");
  }
  if (cfg.eager_test_threshold < 0) {
    throw std::invalid_argument("eager_test_threshold must be non-negative");
  }
  if (!(cfg.cohesion_threshold >= 0.0 && cfg.cohesion_threshold <= 1.0)) {
    throw std::invalid_argument("cohesion_threshold must lie in [0, 1]");
  }
  if (cfg.duplicate_assert_compare != "normalized_text") {
    throw std::invalid_argument("duplicate_assert_compare supports only \"normalized_text\"");
  }
}

}  // namespace xnose::detect
