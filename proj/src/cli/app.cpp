#include "xnose/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "xnose/cli/config.hpp"
#include "xnose/detect/detectors.hpp"
#include "xnose/model/discovery.hpp"
#include "xnose/report/evaluation.hpp"
#include "xnose/report/report.hpp"
#include "xnose/report/stats.hpp"

namespace xnose::cli {

namespace fs = std::filesystem;

namespace {

struct ScanArgs {
  std::string path;
  std::string config;
  std::string format;
  std::string out;
  bool fail_on_smell = false;
  unsigned jobs = 0;
};

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::string format = "json";
};

struct StatsArgs {
  std::string reports;
  std::string format = "json";
};

// Writes to --out when given, else to `out`.
bool emit(const std::string& text, const std::optional<std::string>& path, std::ostream& out,
          std::ostream& err) {
  if (!path) {
    out << text;
    out.flush();
    return static_cast<bool>(out);
  }
  std::error_code ec;
  if (const auto parent = fs::path(*path).parent_path(); !parent.empty()) {
    fs::create_directories(parent, ec);
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  file << text;
  file.close();
  if (!file) {
    err << "xnose: cannot write '" << *path << "'\n";
    return false;
  }
  return true;
}

int cmd_scan(const ScanArgs& args, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  std::string config_path = args.config;
  if (config_path.empty()) {
    if (const char* env = std::getenv("XNOSE_CONFIG"); env != nullptr && *env != '\0') {
      config_path = env;
    }
  }
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    detect::validate(cfg.detectors);
  } catch (const std::exception& e) {
    err << "xnose: " << e.what() << "\n";
    return kExitFatal;
  }
  if (sub.count("--format") > 0) cfg.output.format = args.format;
  if (sub.count("--out") > 0) cfg.output.out = args.out;
  if (sub.count("--fail-on-smell") > 0) cfg.output.fail_on_smell = true;
  if (sub.count("--jobs") > 0) cfg.output.jobs = args.jobs;
  const unsigned jobs = effective_jobs(cfg.output.jobs);

  model::TestProject project;
  try {
    project = model::load_project(args.path, cfg.detectors.model, jobs);
  } catch (const model::DiscoveryError& e) {
    err << "xnose: " << e.what() << "\n";
    return kExitFatal;
  }
  const auto registry = detect::DetectorRegistry::builtin();
  const auto result = detect::detect_all(project, registry, cfg.detectors, jobs);
  const auto report = report::aggregate(project, result, report::config_to_json(cfg.detectors));

  for (const auto& d : report.diagnostics) {
    err << d.file;
    if (d.line > 0) err << ':' << d.line << ':' << d.column;
    err << ": " << d.severity << ": " << d.message << "\n";
  }

  const auto text = cfg.output.format == "text"
                        ? report::format_findings_text(report)
                        : report::dump_canonical(report::to_json(report));
  if (!emit(text, cfg.output.out, out, err)) return kExitFatal;
  if (cfg.output.fail_on_smell && !report.findings.empty()) return kExitSmellsFound;
  return kExitOk;
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  report::ProjectReport predicted;
  report::GroundTruth truth;
  try {
    predicted = report::report_from_json(report::read_json_file(args.pred));
  } catch (const report::SchemaError& e) {
    err << "xnose: " << args.pred << ": " << e.what() << "\n";
    return kExitFatal;
  }
  try {
    truth = report::truth_from_json(report::read_json_file(args.truth));
  } catch (const report::SchemaError& e) {
    err << "xnose: " << args.truth << ": " << e.what() << "\n";
    return kExitFatal;
  }
  const auto metrics = report::evaluate(predicted, truth);
  for (const auto& d : metrics.diagnostics) err << "xnose: " << d << "\n";
  out << (args.format == "text" ? report::format_evaluation_text(metrics)
                                : report::dump_canonical(report::to_json(metrics)));
  return kExitOk;
}

int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(args.reports, ec)) {
    err << "xnose: '" << args.reports << "' is not a directory\n";
    return kExitFatal;
  }
  std::vector<fs::path> paths;
  for (fs::recursive_directory_iterator it(args.reports, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".json") paths.push_back(it->path());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    err << "xnose: no report files (*.json) in '" << args.reports << "'\n";
    return kExitFatal;
  }
  std::vector<report::ProjectReport> reports;
  for (const auto& p : paths) {
    try {
      reports.push_back(report::report_from_json(report::read_json_file(p.string())));
    } catch (const report::SchemaError& e) {
      err << "xnose: " << p.string() << ": " << e.what() << "\n";
      return kExitFatal;
    }
  }
  const auto prev = report::prevalence(reports);
  const auto co = report::co_occurrence(reports);
  out << (args.format == "text" ? report::format_stats_text(prev, co)
                                : report::dump_canonical(report::to_json(prev, co)));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detects test smells in xUnit C# test code.", "xnose"};
  app.set_version_flag("--version", std::string(report::kToolVersion));
  app.require_subcommand(1);

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Scan a directory (or file) of C# tests.");
  scan_cmd->add_option("path", scan.path, "Directory or .cs file to scan")->required();
  scan_cmd->add_option("--config", scan.config, "Config file (TOML subset or .json)");
  scan_cmd->add_option("--format", scan.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  scan_cmd->add_option("--out", scan.out, "Write the report here instead of stdout");
  scan_cmd->add_flag("--fail-on-smell", scan.fail_on_smell, "Exit 3 when anything is found");
  scan_cmd->add_option("--jobs", scan.jobs, "Worker threads (0: one per core)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a scan report against ground truth.");
  eval_cmd->add_option("--pred", eval.pred, "Report JSON from scan")->required();
  eval_cmd->add_option("--truth", eval.truth, "Ground-truth JSON")->required();
  eval_cmd->add_option("--format", eval.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Prevalence and co-occurrence over reports.");
  stats_cmd->add_option("--reports", stats.reports, "Directory of report JSON files")
      ->required();
  stats_cmd->add_option("--format", stats.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFatal;
  }

  if (*scan_cmd) return cmd_scan(scan, *scan_cmd, out, err);
  if (*eval_cmd) return cmd_eval(eval, out, err);
  return cmd_stats(stats, out, err);
}

}  // namespace xnose::cli
