#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xnose/detect/smell.hpp"
#include "xnose/model/test_model.hpp"

namespace xnose::detect {

using model::TestCase;
using model::TestProject;
using model::TestSuite;

using Finding = std::optional<SmellFinding>;

Finding detect_assertion_roulette(const TestCase& c, const DetectorConfig& cfg);
Finding detect_conditional(const TestCase& c, const DetectorConfig& cfg);
Finding detect_inappropriate_assertion(const TestCase& c, const DetectorConfig& cfg);
Finding detect_constructor_initialization(const TestSuite& s, const DetectorConfig& cfg);
Finding detect_duplicate_assert(const TestCase& c, const DetectorConfig& cfg);
Finding detect_empty_test(const TestCase& c, const DetectorConfig& cfg);
Finding detect_eager_test(const TestCase& c, const DetectorConfig& cfg);
Finding detect_ignored_test(const TestCase& c, const DetectorConfig& cfg);
Finding detect_lack_of_cohesion(const TestSuite& s, const DetectorConfig& cfg);
Finding detect_magic_number(const TestCase& c, const DetectorConfig& cfg);
Finding detect_obscure_inline_setup(const TestCase& c, const DetectorConfig& cfg);
Finding detect_redundant_assertion(const TestCase& c, const DetectorConfig& cfg);
Finding detect_redundant_print(const TestCase& c, const DetectorConfig& cfg);
Finding detect_sleepy_test(const TestCase& c, const DetectorConfig& cfg);
Finding detect_sensitive_equality(const TestCase& c, const DetectorConfig& cfg);
Finding detect_unknown_test(const TestCase& c, const DetectorConfig& cfg);

/// Builds a finding anchored in a case or suite, filling file, names and
/// line/column from the tree. Handy for user-written detectors.
SmellFinding case_finding(std::string_view kind, const TestCase& c, syntax::Span span,
                          std::string evidence);
SmellFinding suite_finding(std::string_view kind, const TestSuite& s, syntax::Span span,
                           std::string evidence);

// Cohesion helpers.
using TermVector = std::map<std::string, double>;

/// Identifier parts (camelCase, acronyms, digits, underscores), keywords and
/// literals of `span`, lowercased; punctuation is dropped.
std::vector<std::string> cohesion_terms(const syntax::SyntaxTree& tree, syntax::Span span);
std::vector<std::string> split_identifier(std::string_view identifier);
TermVector term_frequencies(const std::vector<std::string>& terms);
/// In [0, 1]. Two empty vectors are identical (1); one empty vector gives 0.
double cosine_similarity(const TermVector& a, const TermVector& b);
/// Mean cosine similarity over unordered case pairs; nullopt below 2 cases.
std::optional<double> mean_pairwise_similarity(const TestSuite& s);

using CaseDetector = std::function<Finding(const TestCase&, const DetectorConfig&)>;
using SuiteDetector = std::function<Finding(const TestSuite&, const DetectorConfig&)>;

struct DetectorEntry {
  std::string kind;
  Granularity granularity = Granularity::test_case;
  CaseDetector on_case;    // set for case-level entries
  SuiteDetector on_suite;  // set for suite-level entries
};

class DetectorRegistry {
 public:
  /// The 16 built-in detectors in canonical order.
  static DetectorRegistry builtin();

  /// Appends a detector. Throws std::invalid_argument on a duplicate kind
  /// name or a missing predicate.
  void add(DetectorEntry entry);

  const std::vector<DetectorEntry>& entries() const noexcept { return entries_; }
  const DetectorEntry* find(std::string_view kind) const;

 private:
  std::vector<DetectorEntry> entries_;
};

struct DetectionResult {
  std::vector<SmellFinding> findings;  // canonical order
  std::vector<ToolDiagnostic> diagnostics;
};

/// Runs every registered detector over every case and suite. A detector that
/// throws is reported as a tool diagnostic and the scan continues.
DetectionResult detect_all(const TestProject& project, const DetectorRegistry& registry,
                           const DetectorConfig& cfg, unsigned jobs = 1);

}  // namespace xnose::detect
