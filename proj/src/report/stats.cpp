#include "xnose/report/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace xnose::report {

namespace {

// Canonical kinds in table order, then any other names alphabetically.
std::vector<std::string> ordered_kinds(const std::set<std::string>& seen, bool all_canonical) {
  std::vector<std::string> out;
  for (auto k : detect::all_smell_kinds()) {
    std::string name(detect::to_string(k));
    if (all_canonical || seen.contains(name)) out.push_back(std::move(name));
  }
  for (const auto& name : seen) {
    if (!detect::smell_kind_from_string(name)) out.push_back(name);
  }
  return out;
}

template <typename Get>
Summary summarize(const std::vector<ProjectReport>& reports, Get get) {
  Summary s;
  if (reports.empty()) return s;
  s.min = get(reports.front());
  double total = 0;
  for (const auto& r : reports) {
    const std::size_t v = get(r);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    total += static_cast<double>(v);
  }
  s.mean = total / static_cast<double>(reports.size());
  return s;
}

double fraction(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%6.2f%%", x * 100.0);
  return buf;
}

}  // namespace

std::vector<SuiteSmells> suite_smell_sets(const std::vector<ProjectReport>& reports) {
  std::vector<SuiteSmells> out;
  for (std::size_t p = 0; p < reports.size(); ++p) {
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& file : reports[p].files) {
      for (const auto& suite : file.suites) {
        if (index.try_emplace({file.path, suite.name}, out.size()).second) {
          out.push_back({p, file.path, suite.name, {}});
        }
      }
    }
    for (const auto& f : reports[p].findings) {
      auto [it, fresh] = index.try_emplace({f.file, f.suite}, out.size());
      if (fresh) out.push_back({p, f.file, f.suite, {}});
      out[it->second].kinds.insert(f.kind);
    }
  }
  return out;
}

PrevalenceStats prevalence(const std::vector<ProjectReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("prevalence needs at least one report");
  const auto sets = suite_smell_sets(reports);
  std::set<std::string> seen;
  for (const auto& s : sets) seen.insert(s.kinds.begin(), s.kinds.end());

  PrevalenceStats p;
  p.projects = reports.size();
  p.suites = sets.size();
  for (const auto& kind : ordered_kinds(seen, true)) {
    KindPrevalence k;
    k.kind = kind;
    std::set<std::size_t> projects;
    for (const auto& s : sets) {
      if (s.kinds.contains(kind)) {
        ++k.smelly_suites;
        projects.insert(s.project);
      }
    }
    k.smelly_projects = projects.size();
    k.suite_fraction = fraction(k.smelly_suites, p.suites);
    k.project_fraction = fraction(k.smelly_projects, p.projects);
    p.kinds.push_back(std::move(k));
  }
  p.suites_per_project = summarize(reports, [](const ProjectReport& r) { return r.suites; });
  p.cases_per_project = summarize(reports, [](const ProjectReport& r) { return r.cases; });
  return p;
}

CooccurrenceStats co_occurrence(const std::vector<ProjectReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("co-occurrence needs at least one report");
  const auto sets = suite_smell_sets(reports);
  CooccurrenceStats c;
  c.suites = sets.size();
  std::set<std::string> seen;
  for (const auto& s : sets) {
    const auto k = s.kinds.size();
    if (c.histogram_counts.size() <= k) c.histogram_counts.resize(k + 1, 0);
    ++c.histogram_counts[k];
    seen.insert(s.kinds.begin(), s.kinds.end());
  }
  for (const auto n : c.histogram_counts) c.histogram.push_back(fraction(n, c.suites));

  const auto kinds = ordered_kinds(seen, false);
  for (const auto& x : kinds) {
    std::size_t with_x = 0;
    for (const auto& s : sets) with_x += s.kinds.contains(x) ? 1 : 0;
    c.kind_suites.emplace_back(x, with_x);
    for (const auto& y : kinds) {
      std::size_t both = 0;
      for (const auto& s : sets) both += (s.kinds.contains(x) && s.kinds.contains(y)) ? 1 : 0;
      c.conditional.push_back({x, y, both, fraction(both, with_x)});
    }
  }
  return c;
}

std::optional<double> conditional_probability(const CooccurrenceStats& s, const std::string& given,
                                              const std::string& also) {
  for (const auto& e : s.conditional) {
    if (e.given == given && e.also == also) return e.probability;
  }
  for (const auto& [kind, n] : s.kind_suites) {
    if (kind == given) return 0.0;  // X occurs, Y never does
  }
  return std::nullopt;
}

Json to_json(const PrevalenceStats& p, const CooccurrenceStats& c) {
  Json j;
  j["projects"] = p.projects;
  j["suites"] = p.suites;
  Json kinds = Json::array();
  for (const auto& k : p.kinds) {
    kinds.push_back(Json{{"kind", k.kind},
                         {"smelly_suites", k.smelly_suites},
                         {"suite_fraction", round6(k.suite_fraction)},
                         {"smelly_projects", k.smelly_projects},
                         {"project_fraction", round6(k.project_fraction)}});
  }
  j["prevalence"] = std::move(kinds);
  auto summary = [](const Summary& s) {
    return Json{{"min", s.min}, {"mean", round6(s.mean)}, {"max", s.max}};
  };
  j["entities_per_project"] =
      Json{{"suites", summary(p.suites_per_project)}, {"cases", summary(p.cases_per_project)}};

  Json co;
  Json hist = Json::object();
  Json counts = Json::object();
  for (std::size_t k = 0; k < c.histogram.size(); ++k) {
    hist[std::to_string(k)] = round6(c.histogram[k]);
    counts[std::to_string(k)] = c.histogram_counts[k];
  }
  co["histogram"] = std::move(hist);
  co["histogram_counts"] = std::move(counts);
  Json with = Json::object();
  for (const auto& [kind, n] : c.kind_suites) with[kind] = n;
  co["suites_with_kind"] = std::move(with);
  Json matrix = Json::object();
  for (const auto& e : c.conditional) matrix[e.given][e.also] = round6(e.probability);
  co["conditional"] = std::move(matrix);
  j["cooccurrence"] = std::move(co);
  return j;
}

std::string format_stats_text(const PrevalenceStats& p, const CooccurrenceStats& c) {
  std::ostringstream out;
  out << "projects: " << p.projects << "  suites: " << p.suites << "\n";
  out << "suites per project: min " << p.suites_per_project.min << ", mean "
      << round6(p.suites_per_project.mean) << ", max " << p.suites_per_project.max << "\n";
  out << "cases per project:  min " << p.cases_per_project.min << ", mean "
      << round6(p.cases_per_project.mean) << ", max " << p.cases_per_project.max << "\n\n";
  out << "prevalence                  suites     projects\n";
  for (const auto& k : p.kinds) {
    char line[160];
    std::snprintf(line, sizeof line, "%-26s %s  %s\n", k.kind.c_str(),
                  percent(k.suite_fraction).c_str(), percent(k.project_fraction).c_str());
    out << line;
  }
  out << "\nsmell kinds per suite\n";
  for (std::size_t k = 0; k < c.histogram.size(); ++k) {
    out << "  " << k << ": " << percent(c.histogram[k]) << " (" << c.histogram_counts[k]
        << ")\n";
  }
  if (!c.conditional.empty()) {
    out << "\nP(Y | X)\n";
    for (const auto& e : c.conditional) {
      if (e.given == e.also || e.both == 0) continue;
      out << "  " << e.also << " | " << e.given << ": " << percent(e.probability) << "\n";
    }
  }
  return out.str();
}

}  // namespace xnose::report
