#include "xnose/report/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace xnose::report {

namespace {

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", x * 100.0);
  return buf;
}

Json summary_json(const MetricSummary& s) {
  return Json{{"precision", round6(s.precision)},
              {"recall", round6(s.recall)},
              {"f1", round6(s.f1)}};
}

}  // namespace

double precision_of(std::size_t tp, std::size_t fp) {
  return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double recall_of(std::size_t tp, std::size_t fn) {
  return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double f1_of(double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); }

GroundTruth truth_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("", "ground truth must be an array");
  GroundTruth out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto at = "/" + std::to_string(i);
    const auto& e = j[i];
    if (!e.is_object()) throw SchemaError(at, "expected an object");
    auto field = [&](const char* key) -> std::string {
      const auto it = e.find(key);
      if (it == e.end()) throw SchemaError(at + "/" + key, "missing required key");
      if (!it->is_string() || it->get<std::string>().empty()) {
        throw SchemaError(at + "/" + key, "expected a non-empty string");
      }
      return it->get<std::string>();
    };
    TruthEntry t;
    t.file = field("file");
    t.suite = field("suite");
    t.kind = field("kind");
    const auto c = e.find("case");
    if (c == e.end()) throw SchemaError(at + "/case", "missing required key");
    if (c->is_string()) {
      t.case_name = c->get<std::string>();
    } else if (!c->is_null()) {
      throw SchemaError(at + "/case", "expected a string or null");
    }
    if (const auto kind = detect::smell_kind_from_string(t.kind)) {
      const bool suite_level = detect::granularity_of(*kind) == detect::Granularity::test_suite;
      if (suite_level && t.case_name) {
        throw SchemaError(at + "/case", t.kind + " is suite-level; case must be null");
      }
      if (!suite_level && !t.case_name) {
        throw SchemaError(at + "/case", t.kind + " is case-level; case must be a string");
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

Json to_json(const GroundTruth& truth) {
  Json out = Json::array();
  for (const auto& t : truth) {
    out.push_back(Json{{"file", t.file},
                       {"suite", t.suite},
                       {"case", t.case_name ? Json(*t.case_name) : Json(nullptr)},
                       {"kind", t.kind}});
  }
  return out;
}

GroundTruth as_truth(const std::vector<SmellFinding>& findings) {
  GroundTruth out;
  for (const auto& f : findings) out.push_back({f.file, f.suite, f.case_name, f.kind});
  return out;
}

EvaluationMetrics evaluate(const std::vector<SmellFinding>& findings, const GroundTruth& truth,
                           const std::optional<std::set<std::string>>& known_files) {
  const auto predicted_list = as_truth(findings);
  const std::set<TruthEntry> predicted(predicted_list.begin(), predicted_list.end());
  const std::set<TruthEntry> expected(truth.begin(), truth.end());

  EvaluationMetrics m;
  if (known_files) {
    std::set<std::string> reported;
    for (const auto& t : expected) {
      if (!known_files->contains(t.file) && reported.insert(t.file).second) {
        m.diagnostics.push_back("unmatched truth: file '" + t.file +
                                "' is not part of the predicted report");
      }
    }
  }

  std::set<std::string> names;
  for (const auto& t : predicted) names.insert(t.kind);
  for (const auto& t : expected) names.insert(t.kind);
  std::vector<std::string> order;
  for (auto k : detect::all_smell_kinds()) order.emplace_back(detect::to_string(k));
  for (const auto& n : names) {
    if (!detect::smell_kind_from_string(n)) order.push_back(n);
  }

  for (const auto& kind : order) {
    KindMetrics k;
    k.kind = kind;
    for (const auto& t : expected) {
      if (t.kind != kind) continue;
      predicted.contains(t) ? ++k.tp : ++k.fn;
    }
    for (const auto& t : predicted) {
      if (t.kind == kind && !expected.contains(t)) ++k.fp;
    }
    k.instances = k.tp + k.fn;
    k.precision = precision_of(k.tp, k.fp);
    k.recall = recall_of(k.tp, k.fn);
    k.f1 = f1_of(k.precision, k.recall);
    m.kinds.push_back(std::move(k));
  }

  std::size_t counted = 0;
  double weight = 0;
  MetricSummary plain{0, 0, 0};
  MetricSummary weighted{0, 0, 0};
  for (const auto& k : m.kinds) {
    if (k.instances == 0) continue;
    ++counted;
    const auto w = static_cast<double>(k.instances);
    weight += w;
    plain.precision += k.precision;
    plain.recall += k.recall;
    plain.f1 += k.f1;
    weighted.precision += w * k.precision;
    weighted.recall += w * k.recall;
    weighted.f1 += w * k.f1;
  }
  if (counted > 0) {
    const auto n = static_cast<double>(counted);
    m.unweighted = {plain.precision / n, plain.recall / n, plain.f1 / n};
    m.weighted = {weighted.precision / weight, weighted.recall / weight, weighted.f1 / weight};
  }
  return m;
}

EvaluationMetrics evaluate(const ProjectReport& predicted, const GroundTruth& truth) {
  std::set<std::string> files;
  for (const auto& f : predicted.files) files.insert(f.path);
  for (const auto& f : predicted.findings) files.insert(f.file);
  return evaluate(predicted.findings, truth, files);
}

Json to_json(const EvaluationMetrics& m) {
  Json kinds = Json::array();
  for (const auto& k : m.kinds) {
    kinds.push_back(Json{{"kind", k.kind},
                         {"instances", k.instances},
                         {"tp", k.tp},
                         {"fp", k.fp},
                         {"fn", k.fn},
                         {"precision", round6(k.precision)},
                         {"recall", round6(k.recall)},
                         {"f1", round6(k.f1)}});
  }
  std::size_t counted = 0;
  for (const auto& k : m.kinds) counted += k.instances > 0 ? 1 : 0;
  Json j;
  j["kinds"] = std::move(kinds);
  j["summary"] = Json{{"kinds_with_instances", counted},
                      {"unweighted", summary_json(m.unweighted)},
                      {"weighted", summary_json(m.weighted)}};
  j["diagnostics"] = m.diagnostics;
  return j;
}

std::string format_evaluation_text(const EvaluationMetrics& m) {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof line, "%-26s %9s %6s %6s %6s %10s %10s %10s\n", "kind", "instances",
                "TP", "FP", "FN", "precision", "recall", "F1");
  out << line;
  std::size_t instances = 0;
  for (const auto& k : m.kinds) {
    instances += k.instances;
    std::snprintf(line, sizeof line, "%-26s %9zu %6zu %6zu %6zu %10s %10s %10s\n",
                  k.kind.c_str(), k.instances, k.tp, k.fp, k.fn, percent(k.precision).c_str(),
                  percent(k.recall).c_str(), percent(k.f1).c_str());
    out << line;
  }
  std::snprintf(line, sizeof line, "%-26s %9s %6s %6s %6s %10s %10s %10s\n",
                "Average (unweighted)", "-", "", "", "", percent(m.unweighted.precision).c_str(),
                percent(m.unweighted.recall).c_str(), percent(m.unweighted.f1).c_str());
  out << line;
  std::snprintf(line, sizeof line, "%-26s %9zu %6s %6s %6s %10s %10s %10s\n",
                "Average (weighted)", instances, "", "", "",
                percent(m.weighted.precision).c_str(), percent(m.weighted.recall).c_str(),
                percent(m.weighted.f1).c_str());
  out << line;
  for (const auto& d : m.diagnostics) out << "note: " << d << "\n";
  return out.str();
}

}  // namespace xnose::report
