#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xnose/report/report.hpp"

namespace xnose::report {

struct SuiteSmells {
  std::size_t project = 0;  // index into the report list
  std::string file;
  std::string suite;
  std::set<std::string> kinds;
};

/// One entry per suite of every report, smell-free suites included. Case
/// findings are lifted to their suite.
std::vector<SuiteSmells> suite_smell_sets(const std::vector<ProjectReport>& reports);

struct KindPrevalence {
  std::string kind;
  std::size_t smelly_suites = 0;
  std::size_t smelly_projects = 0;
  double suite_fraction = 0;
  double project_fraction = 0;
};

struct Summary {
  std::size_t min = 0;
  double mean = 0;
  std::size_t max = 0;
};

struct PrevalenceStats {
  std::size_t projects = 0;
  std::size_t suites = 0;
  std::vector<KindPrevalence> kinds;  // canonical kinds, then others by name
  Summary suites_per_project;
  Summary cases_per_project;
};

struct ConditionalEntry {
  std::string given;   // X
  std::string also;    // Y
  std::size_t both = 0;
  double probability = 0;  // P(Y | X)
};

struct CooccurrenceStats {
  std::size_t suites = 0;
  std::vector<std::size_t> histogram_counts;  // index k: suites with exactly k kinds
  std::vector<double> histogram;              // fractions of `suites`
  std::vector<std::pair<std::string, std::size_t>> kind_suites;  // |suites with X|, X occurring
  std::vector<ConditionalEntry> conditional;  // X, Y both occurring
};

/// Throws std::invalid_argument on an empty report list.
PrevalenceStats prevalence(const std::vector<ProjectReport>& reports);
CooccurrenceStats co_occurrence(const std::vector<ProjectReport>& reports);

/// Conditional probability lookup; nullopt when X never occurs.
std::optional<double> conditional_probability(const CooccurrenceStats& s, const std::string& given,
                                              const std::string& also);

Json to_json(const PrevalenceStats& p, const CooccurrenceStats& c);
std::string format_stats_text(const PrevalenceStats& p, const CooccurrenceStats& c);

}  // namespace xnose::report
