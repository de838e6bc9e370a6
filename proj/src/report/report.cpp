#include "xnose/report/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace xnose::report {

using detect::Granularity;

namespace {

Json patterns_to_json(const std::vector<model::CallPattern>& patterns) {
  Json out = Json::array();
  for (const auto& p : patterns) out.push_back(p.to_string());
  return out;
}

// --- schema helpers ------------------------------------------------------

std::string child_pointer(const std::string& at, std::string_view key) {
  return at + "/" + std::string(key);
}

const Json& require(const Json& obj, const std::string& at, std::string_view key) {
  if (!obj.is_object()) throw SchemaError(at.empty() ? "/" : at, "expected an object");
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) throw SchemaError(child_pointer(at, key), "missing required key");
  return *it;
}

std::string get_string(const Json& obj, const std::string& at, std::string_view key) {
  const auto& v = require(obj, at, key);
  if (!v.is_string()) throw SchemaError(child_pointer(at, key), "expected a string");
  return v.get<std::string>();
}

std::size_t get_count(const Json& obj, const std::string& at, std::string_view key) {
  const auto& v = require(obj, at, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw SchemaError(child_pointer(at, key), "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

const Json& get_array(const Json& obj, const std::string& at, std::string_view key) {
  const auto& v = require(obj, at, key);
  if (!v.is_array()) throw SchemaError(child_pointer(at, key), "expected an array");
  return v;
}

std::optional<std::string> get_optional_string(const Json& obj, const std::string& at,
                                               std::string_view key) {
  const auto& v = require(obj, at, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw SchemaError(child_pointer(at, key), "expected a string or null");
  return v.get<std::string>();
}

}  // namespace

double round6(double x) { return std::round(x * 1e6) / 1e6; }

Json config_to_json(const detect::DetectorConfig& cfg) {
  Json model;
  model["assertion_receivers"] = cfg.model.assertion_receivers;
  model["sleep_calls"] = patterns_to_json(cfg.model.sleep_calls);
  model["output_calls"] = patterns_to_json(cfg.model.output_calls);
  model["framework_calls"] = patterns_to_json(cfg.model.framework_calls);
  Json detectors;
  detectors["obscure_setup_threshold"] = cfg.obscure_setup_threshold;
  detectors["eager_test_threshold"] = cfg.eager_test_threshold;
  detectors["cohesion_threshold"] = round6(cfg.cohesion_threshold);
  detectors["magic_number_deep"] = cfg.magic_number_deep;
  detectors["magic_number_allowlist"] = cfg.magic_number_allowlist;
  detectors["duplicate_assert_compare"] = cfg.duplicate_assert_compare;
  Json out;
  out["model"] = std::move(model);
  out["detectors"] = std::move(detectors);
  return out;
}

ProjectReport aggregate(const model::TestProject& project, const detect::DetectionResult& result,
                        Json config, const std::vector<std::string>& extra_kinds) {
  ProjectReport r;
  r.config = std::move(config);
  r.project = project.root;
  r.suites = project.suite_count();
  r.cases = project.case_count();
  r.findings = result.findings;
  std::sort(r.findings.begin(), r.findings.end(), detect::finding_less);

  std::map<std::string, std::size_t> counts;
  for (const auto& f : r.findings) ++counts[f.kind];
  for (auto kind : detect::all_smell_kinds()) {
    const std::string name(detect::to_string(kind));
    r.totals.emplace_back(name, counts[name]);
    counts.erase(name);
  }
  for (const auto& k : extra_kinds) {
    if (!detect::smell_kind_from_string(k)) counts.try_emplace(k, 0);
  }
  for (const auto& [name, n] : counts) r.totals.emplace_back(name, n);

  for (const auto& file : project.files) {
    std::vector<syntax::ParseDiagnostic> diags = file.diagnostics;
    std::stable_sort(diags.begin(), diags.end(),
                     [](const auto& a, const auto& b) { return a.span.begin < b.span.begin; });
    for (const auto& d : diags) {
      const auto loc = file.tree->file().location(d.span.begin);
      r.diagnostics.push_back({"parse", std::string(syntax::to_string(d.severity)), file.path,
                               loc.line, loc.column, d.message});
    }
    if (file.suites.empty()) continue;
    FileEntry entry{file.path, {}};
    for (const auto& s : file.suites) entry.suites.push_back({s.name, s.cases.size()});
    r.files.push_back(std::move(entry));
  }
  auto tool = result.diagnostics;
  std::stable_sort(tool.begin(), tool.end(), [](const auto& a, const auto& b) {
    return std::tie(a.file, a.message) < std::tie(b.file, b.message);
  });
  for (const auto& d : tool) r.diagnostics.push_back({"tool", "error", d.file, 0, 0, d.message});
  for (const auto& s : project.skipped_files) r.skipped.push_back({s.path, s.reason});
  return r;
}

Json to_json(const ProjectReport& r) {
  Json j;
  j["tool"] = r.tool;
  j["version"] = r.version;
  j["config"] = r.config;
  j["project"] = r.project;
  j["summary"] = Json{{"suites", r.suites}, {"cases", r.cases}};
  Json findings = Json::array();
  for (const auto& f : r.findings) {
    Json e;
    e["kind"] = f.kind;
    e["granularity"] = detect::to_string(f.granularity);
    e["file"] = f.file;
    e["suite"] = f.suite;
    e["case"] = f.case_name ? Json(*f.case_name) : Json(nullptr);
    e["line"] = f.line;
    e["col"] = f.column;
    e["evidence"] = f.evidence;
    findings.push_back(std::move(e));
  }
  j["findings"] = std::move(findings);
  Json totals = Json::object();
  for (const auto& [kind, n] : r.totals) totals[kind] = n;
  j["totals"] = std::move(totals);
  Json diags = Json::array();
  for (const auto& d : r.diagnostics) {
    diags.push_back(Json{{"source", d.source},
                         {"severity", d.severity},
                         {"file", d.file},
                         {"line", d.line},
                         {"col", d.column},
                         {"message", d.message}});
  }
  j["diagnostics"] = std::move(diags);
  Json files = Json::array();
  for (const auto& f : r.files) {
    Json suites = Json::array();
    for (const auto& s : f.suites) suites.push_back(Json{{"name", s.name}, {"cases", s.cases}});
    files.push_back(Json{{"path", f.path}, {"suites", std::move(suites)}});
  }
  j["files"] = std::move(files);
  Json skipped = Json::array();
  for (const auto& s : r.skipped) skipped.push_back(Json{{"file", s.file}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped);
  return j;
}

ProjectReport report_from_json(const Json& j) {
  ProjectReport r;
  r.tool = get_string(j, "", "tool");
  r.version = get_string(j, "", "version");
  if (j.contains("config")) r.config = j["config"];
  if (j.contains("project")) r.project = get_string(j, "", "project");
  const auto& summary = require(j, "", "summary");
  r.suites = get_count(summary, "/summary", "suites");
  r.cases = get_count(summary, "/summary", "cases");

  const auto& findings = get_array(j, "", "findings");
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const auto at = "/findings/" + std::to_string(i);
    const auto& e = findings[i];
    SmellFinding f;
    f.kind = get_string(e, at, "kind");
    if (f.kind.empty()) throw SchemaError(at + "/kind", "empty kind name");
    const auto gran = get_string(e, at, "granularity");
    if (gran == "case") {
      f.granularity = Granularity::test_case;
    } else if (gran == "suite") {
      f.granularity = Granularity::test_suite;
    } else {
      throw SchemaError(at + "/granularity", "expected \"case\" or \"suite\"");
    }
    f.file = get_string(e, at, "file");
    f.suite = get_string(e, at, "suite");
    f.case_name = get_optional_string(e, at, "case");
    if (f.granularity == Granularity::test_case && !f.case_name) {
      throw SchemaError(at + "/case", "case-level finding without a case name");
    }
    f.line = get_count(e, at, "line");
    f.column = get_count(e, at, "col");
    f.evidence = get_string(e, at, "evidence");
    r.findings.push_back(std::move(f));
  }

  const auto& totals = require(j, "", "totals");
  if (!totals.is_object()) throw SchemaError("/totals", "expected an object");
  for (const auto& [kind, value] : totals.items()) {
    r.totals.emplace_back(kind, get_count(totals, "/totals", kind));
  }

  if (j.contains("diagnostics")) {
    const auto& diags = get_array(j, "", "diagnostics");
    for (std::size_t i = 0; i < diags.size(); ++i) {
      const auto at = "/diagnostics/" + std::to_string(i);
      const auto& d = diags[i];
      r.diagnostics.push_back({get_string(d, at, "source"), get_string(d, at, "severity"),
                               get_string(d, at, "file"), get_count(d, at, "line"),
                               get_count(d, at, "col"), get_string(d, at, "message")});
    }
  }
  if (j.contains("files")) {
    const auto& files = get_array(j, "", "files");
    for (std::size_t i = 0; i < files.size(); ++i) {
      const auto at = "/files/" + std::to_string(i);
      FileEntry entry{get_string(files[i], at, "path"), {}};
      const auto& suites = get_array(files[i], at, "suites");
      for (std::size_t k = 0; k < suites.size(); ++k) {
        const auto sat = at + "/suites/" + std::to_string(k);
        entry.suites.push_back({get_string(suites[k], sat, "name"), get_count(suites[k], sat, "cases")});
      }
      r.files.push_back(std::move(entry));
    }
  }
  if (j.contains("skipped")) {
    const auto& skipped = get_array(j, "", "skipped");
    for (std::size_t i = 0; i < skipped.size(); ++i) {
      const auto at = "/skipped/" + std::to_string(i);
      r.skipped.push_back({get_string(skipped[i], at, "file"), get_string(skipped[i], at, "reason")});
    }
  }
  return r;
}

std::string dump_canonical(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

std::string format_findings_text(const ProjectReport& report) {
  std::ostringstream out;
  for (const auto& f : report.findings) {
    out << f.file << ':' << f.line << ':' << f.column << ' ' << f.kind << ' ' << f.suite;
    if (f.case_name) out << '.' << *f.case_name;
    out << ' ' << f.evidence << '\n';
  }
  return out.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", "'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace xnose::report
