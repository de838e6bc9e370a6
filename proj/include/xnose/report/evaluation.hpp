#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xnose/report/report.hpp"

namespace xnose::report {

struct TruthEntry {
  std::string file;
  std::string suite;
  std::optional<std::string> case_name;
  std::string kind;

  friend auto operator<=>(const TruthEntry&, const TruthEntry&) = default;
};

using GroundTruth = std::vector<TruthEntry>;

GroundTruth truth_from_json(const Json& j);
Json to_json(const GroundTruth& truth);
/// The findings of a report, recast as truth entries.
GroundTruth as_truth(const std::vector<SmellFinding>& findings);

struct KindMetrics {
  std::string kind;
  std::size_t instances = 0;  // TP + FN
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 1;
  double recall = 1;
  double f1 = 1;
};

struct MetricSummary {
  double precision = 1;
  double recall = 1;
  double f1 = 1;
};

struct EvaluationMetrics {
  std::vector<KindMetrics> kinds;  // canonical kinds, then others by name
  MetricSummary unweighted;        // plain mean over kinds with instances
  MetricSummary weighted;          // instance-weighted mean, same kinds
  std::vector<std::string> diagnostics;
};

double precision_of(std::size_t tp, std::size_t fp);
double recall_of(std::size_t tp, std::size_t fn);
double f1_of(double precision, double recall);

/// Matches on (file, suite, case, kind). When `known_files` is given, truth
/// entries naming other files are reported as unmatched (and count as FN).
EvaluationMetrics evaluate(const std::vector<SmellFinding>& findings, const GroundTruth& truth,
                           const std::optional<std::set<std::string>>& known_files = {});
EvaluationMetrics evaluate(const ProjectReport& predicted, const GroundTruth& truth);

Json to_json(const EvaluationMetrics& m);
std::string format_evaluation_text(const EvaluationMetrics& m);

}  // namespace xnose::report
