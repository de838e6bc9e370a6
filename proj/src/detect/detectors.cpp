#include "xnose/detect/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <utility>

#include "xnose/parallel.hpp"
#include "xnose/syntax/query.hpp"

namespace xnose::detect {

using model::AssertionCall;
using model::InvocationClass;
using syntax::KindSet;
using syntax::NodeKind;
using syntax::Span;
using syntax::SyntaxNode;
using syntax::TokenKind;

namespace {

std::string name_of(SmellKind k) { return std::string(to_string(k)); }

std::string plural(std::size_t n, std::string_view word) {
  return std::to_string(n) + " " + std::string(word) + (n == 1 ? "" : "s");
}

const SyntaxNode& strip_parens(const SyntaxNode& n) {
  const SyntaxNode* cur = &n;
  while (cur->is(NodeKind::parenthesized_expression) && cur->children().size() == 1) {
    cur = &cur->children().front();
  }
  return *cur;
}

bool is_true_or_false(const AssertionCall& a) { return a.method == "True" || a.method == "False"; }

bool is_tostring_call(const SyntaxNode& n) {
  if (!n.is(NodeKind::invocation_expression) || n.children().empty()) return false;
  const auto& target = n.children().front();
  return target.is(NodeKind::member_access_expression) && target.name() == "ToString";
}

const SyntaxNode* find_tostring(const SyntaxNode& arg) {
  if (is_tostring_call(arg)) return &arg;
  for (const auto* n : syntax::find_descendants(arg, KindSet{NodeKind::invocation_expression})) {
    if (is_tostring_call(*n)) return n;
  }
  return nullptr;
}

bool allowlisted(const DetectorConfig& cfg, std::string_view text) {
  return std::find(cfg.magic_number_allowlist.begin(), cfg.magic_number_allowlist.end(), text) !=
         cfg.magic_number_allowlist.end();
}

// A numeric literal, optionally under a sign: `5`, `-1`, `+2.5`.
bool signed_literal(const SyntaxNode& n) {
  if (n.is(NodeKind::numeric_literal)) return true;
  return n.is(NodeKind::prefix_unary_expression) && (n.op() == "-" || n.op() == "+") &&
         n.children().size() == 1 && n.children().front().is(NodeKind::numeric_literal);
}

const SyntaxNode* magic_in(const SyntaxNode& n, const syntax::SyntaxTree& tree,
                           const DetectorConfig& cfg) {
  if (signed_literal(n)) {
    return allowlisted(cfg, model::compact_text(tree, n.span())) ? nullptr : &n;
  }
  for (const auto& child : n.children()) {
    if (const auto* hit = magic_in(child, tree, cfg)) return hit;
  }
  return nullptr;
}

bool implements_fixture_interface(const TestSuite& s) {
  for (const auto& written : s.base_list_names) {
    std::string_view name = written;
    name = name.substr(0, name.find('<'));
    if (const auto dot = name.find_last_of(".:"); dot != std::string_view::npos) {
      name = name.substr(dot + 1);
    }
    if (name.starts_with("IClassFixture") || name.starts_with("IUseFixture") ||
        name == "IDisposable" || name == "IAsyncLifetime") {
      return true;
    }
  }
  return false;
}

std::string node_label(const SyntaxNode& n) {
  auto label = std::string(syntax::to_string(n.kind()));
  std::replace(label.begin(), label.end(), '-', ' ');
  return label;
}

}  // namespace

SmellFinding case_finding(std::string_view kind, const TestCase& c, Span span,
                          std::string evidence) {
  SmellFinding f;
  f.kind = std::string(kind);
  f.granularity = Granularity::test_case;
  f.file = c.tree->file().path();
  f.suite = c.suite_name;
  f.case_name = c.name;
  f.span = span;
  const auto loc = c.tree->file().location(span.begin);
  f.line = loc.line;
  f.column = loc.column;
  f.evidence = std::move(evidence);
  return f;
}

SmellFinding suite_finding(std::string_view kind, const TestSuite& s, Span span,
                           std::string evidence) {
  SmellFinding f;
  f.kind = std::string(kind);
  f.granularity = Granularity::test_suite;
  f.file = s.file;
  f.suite = s.name;
  f.span = span;
  const auto loc = s.tree->file().location(span.begin);
  f.line = loc.line;
  f.column = loc.column;
  f.evidence = std::move(evidence);
  return f;
}

Finding detect_assertion_roulette(const TestCase& c, const DetectorConfig&) {
  std::size_t undocumented = 0;
  Span second;
  for (const auto& a : c.assertions) {
    if (a.is_documented) continue;
    if (++undocumented == 2) second = a.span;
  }
  if (undocumented < 2) return std::nullopt;
  return case_finding(name_of(SmellKind::AssertionRoulette), c, second,
                      plural(undocumented, "undocumented assertion"));
}

Finding detect_conditional(const TestCase& c, const DetectorConfig&) {
  if (c.body == nullptr) return std::nullopt;
  static const KindSet kinds{NodeKind::if_statement,          NodeKind::switch_statement,
                             NodeKind::switch_expression,     NodeKind::conditional_expression,
                             NodeKind::for_statement,         NodeKind::foreach_statement,
                             NodeKind::while_statement,       NodeKind::do_statement};
  const auto hits = syntax::find_descendants(*c.body, kinds);
  if (hits.empty()) return std::nullopt;
  return case_finding(name_of(SmellKind::ConditionalTestSmell), c, hits.front()->span(),
                      node_label(*hits.front()) +
                          (hits.size() > 1 ? " and " + plural(hits.size() - 1, "other construct")
                                           : ""));
}

Finding detect_inappropriate_assertion(const TestCase& c, const DetectorConfig&) {
  static const std::set<std::string_view> comparisons{"==", "!=", "<", "<=", ">", ">="};
  for (const auto& a : c.assertions) {
    if (!is_true_or_false(a) || a.arguments.empty()) continue;
    const auto& first = strip_parens(*a.arguments.front());
    const bool comparison =
        first.is(NodeKind::binary_expression) && comparisons.contains(first.op());
    const bool equals_call = first.is(NodeKind::invocation_expression) &&
                             !first.children().empty() &&
                             first.children().front().is(NodeKind::member_access_expression) &&
                             first.children().front().name() == "Equals";
    if (comparison || equals_call) {
      return case_finding(name_of(SmellKind::InappropriateAssertion), c, a.span,
                          "Assert." + a.method + " on " +
                              (comparison ? "'" + std::string(first.op()) + "' comparison"
                                          : std::string("Equals call")));
    }
  }
  return std::nullopt;
}

Finding detect_constructor_initialization(const TestSuite& s, const DetectorConfig&) {
  if (!s.has_explicit_constructor || s.constructor_statement_count < 1) return std::nullopt;
  if (implements_fixture_interface(s)) return std::nullopt;
  return suite_finding(name_of(SmellKind::ConstructorInitialization), s, s.constructor_span,
                       "constructor with " + plural(s.constructor_statement_count, "statement"));
}

Finding detect_duplicate_assert(const TestCase& c, const DetectorConfig&) {
  for (std::size_t i = 1; i < c.assertions.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (c.assertions[i].normalized_text == c.assertions[j].normalized_text) {
        return case_finding(name_of(SmellKind::DuplicateAssert), c, c.assertions[i].span,
                            "assertion " + std::to_string(i + 1) + " repeats assertion " +
                                std::to_string(j + 1));
      }
    }
  }
  return std::nullopt;
}

namespace {

// Local functions are skipped by the statement census, but one that holds
// code (say an assertion) keeps the test from being empty.
bool holds_code(const SyntaxNode& body) {
  if (body.is(NodeKind::arrow_expression_clause)) return true;
  if (!syntax::enclosing_statements(body).empty()) return true;
  for (const auto& child : body.children()) {
    if (!child.is(NodeKind::local_function_statement)) continue;
    for (const auto& part : child.children()) {
      if ((part.is(NodeKind::block) || part.is(NodeKind::arrow_expression_clause)) &&
          holds_code(part)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

Finding detect_empty_test(const TestCase& c, const DetectorConfig&) {
  if (!c.statements.empty()) return std::nullopt;
  if (c.body != nullptr && holds_code(*c.body)) return std::nullopt;
  return case_finding(name_of(SmellKind::EmptyTest), c, c.name_span, "no executable statements");
}

Finding detect_eager_test(const TestCase& c, const DetectorConfig& cfg) {
  std::set<std::pair<std::string, std::string>> distinct;
  Span anchor;
  for (const auto& inv : c.invocations) {
    if (inv.classification != InvocationClass::act) continue;
    if (distinct.emplace(inv.receiver, inv.callee).second &&
        distinct.size() == static_cast<std::size_t>(cfg.eager_test_threshold) + 1) {
      anchor = inv.span;
    }
  }
  if (distinct.size() <= static_cast<std::size_t>(cfg.eager_test_threshold)) return std::nullopt;
  return case_finding(name_of(SmellKind::EagerTest), c, anchor,
                      plural(distinct.size(), "distinct production call"));
}

Finding detect_ignored_test(const TestCase& c, const DetectorConfig&) {
  if (!c.skip_reason) return std::nullopt;
  return case_finding(name_of(SmellKind::IgnoredTest), c, c.skip_span,
                      "skipped: " + *c.skip_reason);
}

Finding detect_lack_of_cohesion(const TestSuite& s, const DetectorConfig& cfg) {
  const auto mean = mean_pairwise_similarity(s);
  if (!mean || *mean >= cfg.cohesion_threshold) return std::nullopt;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *mean);
  return suite_finding(name_of(SmellKind::LackOfCohesion), s, s.name_span,
                       std::string("mean pairwise similarity ") + buf);
}

Finding detect_magic_number(const TestCase& c, const DetectorConfig& cfg) {
  for (const auto& a : c.assertions) {
    for (const auto* arg : a.arguments) {
      const SyntaxNode* hit = nullptr;
      if (cfg.magic_number_deep) {
        hit = magic_in(*arg, *c.tree, cfg);
      } else if (signed_literal(*arg) &&
                 !allowlisted(cfg, model::compact_text(*c.tree, arg->span()))) {
        hit = arg;
      }
      if (hit != nullptr) {
        return case_finding(name_of(SmellKind::MagicNumber), c, hit->span(),
                            "literal " + model::compact_text(*c.tree, hit->span()) +
                                " in Assert." + a.method);
      }
    }
  }
  return std::nullopt;
}

Finding detect_obscure_inline_setup(const TestCase& c, const DetectorConfig& cfg) {
  const auto limit = static_cast<std::size_t>(cfg.obscure_setup_threshold);
  if (c.local_declaration_count <= limit) return std::nullopt;
  return case_finding(name_of(SmellKind::ObscureInLineSetup), c,
                      c.local_declarations[limit]->span(),
                      plural(c.local_declaration_count, "local declaration"));
}

Finding detect_redundant_assertion(const TestCase& c, const DetectorConfig&) {
  static const std::set<std::string> pairwise{"Equal", "NotEqual", "Same", "NotSame",
                                              "StrictEqual"};
  for (const auto& a : c.assertions) {
    if (pairwise.contains(a.method) && a.arguments.size() >= 2 &&
        syntax::normalized_text(*c.tree, a.arguments[0]->span()) ==
            syntax::normalized_text(*c.tree, a.arguments[1]->span())) {
      return case_finding(name_of(SmellKind::RedundantAssertion), c, a.span,
                          "Assert." + a.method + " compares an expression with itself");
    }
    if (is_true_or_false(a) && !a.arguments.empty() &&
        a.arguments.front()->is(NodeKind::boolean_literal)) {
      return case_finding(name_of(SmellKind::RedundantAssertion), c, a.span,
                          "Assert." + a.method + " on constant " +
                              std::string(a.arguments.front()->text()));
    }
  }
  return std::nullopt;
}

Finding detect_redundant_print(const TestCase& c, const DetectorConfig&) {
  for (const auto& inv : c.invocations) {
    if (inv.classification == InvocationClass::output) {
      return case_finding(name_of(SmellKind::RedundantPrint), c, inv.span,
                          "calls " + inv.receiver + "." + inv.callee);
    }
  }
  return std::nullopt;
}

Finding detect_sleepy_test(const TestCase& c, const DetectorConfig&) {
  for (const auto& inv : c.invocations) {
    if (inv.classification == InvocationClass::sleep) {
      return case_finding(name_of(SmellKind::SleepyTest), c, inv.span,
                          "calls " + inv.receiver + "." + inv.callee);
    }
  }
  return std::nullopt;
}

Finding detect_sensitive_equality(const TestCase& c, const DetectorConfig&) {
  for (const auto& a : c.assertions) {
    for (const auto* arg : a.arguments) {
      if (const auto* call = find_tostring(*arg)) {
        return case_finding(name_of(SmellKind::SensitiveEquality), c, call->span(),
                            "ToString() inside Assert." + a.method);
      }
    }
  }
  return std::nullopt;
}

Finding detect_unknown_test(const TestCase& c, const DetectorConfig&) {
  if (!c.assertions.empty()) return std::nullopt;
  return case_finding(name_of(SmellKind::UnknownTest), c, c.name_span, "no assertions");
}

// --- cohesion ------------------------------------------------------------

std::vector<std::string> split_identifier(std::string_view id) {
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) parts.push_back(std::move(cur));
    cur.clear();
  };
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t i = 0; i < id.size(); ++i) {
    const char ch = id[i];
    if (ch == '_' || ch == '@') {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const char prev = id[i - 1];
      const bool boundary =
          (upper(ch) && (lower(prev) || digit(prev))) ||
          (digit(ch) != digit(prev) && prev != '_') ||
          // The last capital of an acronym starts a new word: "HTTPServer".
          (upper(ch) && upper(prev) && i + 1 < id.size() && lower(id[i + 1]));
      if (boundary) flush();
    }
    cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  flush();
  return parts;
}

std::vector<std::string> cohesion_terms(const syntax::SyntaxTree& tree, Span span) {
  std::vector<std::string> terms;
  for (const auto& t : tree.tokens_in(span)) {
    switch (t.kind) {
      case TokenKind::identifier:
        for (auto& p : split_identifier(t.text)) terms.push_back(std::move(p));
        break;
      case TokenKind::keyword:
      case TokenKind::numeric_literal:
      case TokenKind::string_literal:
      case TokenKind::interpolated_string:
      case TokenKind::char_literal: {
        std::string s(t.text);
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        terms.push_back(std::move(s));
        break;
      }
      default:
        break;
    }
  }
  return terms;
}

TermVector term_frequencies(const std::vector<std::string>& terms) {
  TermVector v;
  for (const auto& t : terms) v[t] += 1.0;
  return v;
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0, na = 0, nb = 0;
  for (const auto& [term, w] : a) {
    na += w * w;
    if (auto it = b.find(term); it != b.end()) dot += w * it->second;
  }
  for (const auto& [term, w] : b) nb += w * w;
  const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(sim, 0.0, 1.0);
}

std::optional<double> mean_pairwise_similarity(const TestSuite& s) {
  if (s.cases.size() < 2) return std::nullopt;
  std::vector<TermVector> vectors;
  vectors.reserve(s.cases.size());
  for (const auto& c : s.cases) {
    vectors.push_back(c.body ? term_frequencies(cohesion_terms(*c.tree, c.body->span()))
                             : TermVector{});
  }
  double total = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      total += cosine_similarity(vectors[i], vectors[j]);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

// --- registry ------------------------------------------------------------

DetectorRegistry DetectorRegistry::builtin() {
  DetectorRegistry r;
  auto add_case = [&](SmellKind k, Finding (*fn)(const TestCase&, const DetectorConfig&)) {
    r.add({name_of(k), Granularity::test_case, fn, nullptr});
  };
  auto add_suite = [&](SmellKind k, Finding (*fn)(const TestSuite&, const DetectorConfig&)) {
    r.add({name_of(k), Granularity::test_suite, nullptr, fn});
  };
  add_suite(SmellKind::LackOfCohesion, detect_lack_of_cohesion);
  add_case(SmellKind::EmptyTest, detect_empty_test);
  add_case(SmellKind::ConditionalTestSmell, detect_conditional);
  add_case(SmellKind::AssertionRoulette, detect_assertion_roulette);
  add_case(SmellKind::UnknownTest, detect_unknown_test);
  add_case(SmellKind::RedundantPrint, detect_redundant_print);
  add_case(SmellKind::SleepyTest, detect_sleepy_test);
  add_case(SmellKind::IgnoredTest, detect_ignored_test);
  add_case(SmellKind::RedundantAssertion, detect_redundant_assertion);
  add_case(SmellKind::DuplicateAssert, detect_duplicate_assert);
  add_case(SmellKind::MagicNumber, detect_magic_number);
  add_case(SmellKind::EagerTest, detect_eager_test);
  add_case(SmellKind::InappropriateAssertion, detect_inappropriate_assertion);
  add_case(SmellKind::SensitiveEquality, detect_sensitive_equality);
  add_suite(SmellKind::ConstructorInitialization, detect_constructor_initialization);
  add_case(SmellKind::ObscureInLineSetup, detect_obscure_inline_setup);
  return r;
}

void DetectorRegistry::add(DetectorEntry entry) {
  if (entry.kind.empty()) throw std::invalid_argument("detector kind name is empty");
  if (find(entry.kind) != nullptr) {
    throw std::invalid_argument("detector kind '" + entry.kind + "' is already registered");
  }
  const bool ok = entry.granularity == Granularity::test_case ? static_cast<bool>(entry.on_case)
                                                               : static_cast<bool>(entry.on_suite);
  if (!ok) throw std::invalid_argument("detector '" + entry.kind + "' has no predicate");
  entries_.push_back(std::move(entry));
}

const DetectorEntry* DetectorRegistry::find(std::string_view kind) const {
  for (const auto& e : entries_) {
    if (e.kind == kind) return &e;
  }
  return nullptr;
}

namespace {

// Pins kind, granularity and names to the detector that produced the finding
// and keeps its span inside the owning declaration.
void normalize(SmellFinding& f, const DetectorEntry& e, const TestSuite& s, const TestCase* c,
               std::vector<ToolDiagnostic>& diags) {
  f.kind = e.kind;
  f.granularity = e.granularity;
  f.file = s.file;
  f.suite = s.name;
  f.case_name = c ? std::optional<std::string>(c->name) : std::nullopt;
  const Span owner = c ? c->span : s.span;
  if (!owner.contains(f.span)) {
    diags.push_back({s.file, "detector " + e.kind + " reported a span outside its target"});
    f.span = c ? c->name_span : s.name_span;
  }
  const auto loc = s.tree->file().location(f.span.begin);
  f.line = loc.line;
  f.column = loc.column;
}

template <typename Fn>
void guarded(const DetectorEntry& e, const std::string& where, std::vector<ToolDiagnostic>& diags,
             const std::string& file, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& ex) {
    diags.push_back({file, "detector " + e.kind + " failed on " + where + ": " + ex.what()});
  } catch (...) {
    diags.push_back({file, "detector " + e.kind + " failed on " + where});
  }
}

}  // namespace

DetectionResult detect_all(const TestProject& project, const DetectorRegistry& registry,
                           const DetectorConfig& cfg, unsigned jobs) {
  std::vector<DetectionResult> per_file(project.files.size());
  parallel_for(project.files.size(), jobs, [&](std::size_t i) {
    auto& out = per_file[i];
    for (const auto& suite : project.files[i].suites) {
      for (const auto& entry : registry.entries()) {
        if (entry.granularity == Granularity::test_suite) {
          guarded(entry, suite.name, out.diagnostics, suite.file, [&] {
            if (auto f = entry.on_suite(suite, cfg)) {
              normalize(*f, entry, suite, nullptr, out.diagnostics);
              out.findings.push_back(std::move(*f));
            }
          });
          continue;
        }
        for (const auto& c : suite.cases) {
          guarded(entry, suite.name + "." + c.name, out.diagnostics, suite.file, [&] {
            if (auto f = entry.on_case(c, cfg)) {
              normalize(*f, entry, suite, &c, out.diagnostics);
              out.findings.push_back(std::move(*f));
            }
          });
        }
      }
    }
  });

  DetectionResult result;
  for (auto& r : per_file) {
    std::move(r.findings.begin(), r.findings.end(), std::back_inserter(result.findings));
    std::move(r.diagnostics.begin(), r.diagnostics.end(), std::back_inserter(result.diagnostics));
  }
  std::stable_sort(result.findings.begin(), result.findings.end(), finding_less);
  return result;
}

}  // namespace xnose::detect
