#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "support/helpers.hpp"
#include "xnose/cli/app.hpp"
#include "xnose/cli/config.hpp"

namespace xnose::cli {
namespace {

namespace fs = std::filesystem;
using xnose::testing::read_file;
using xnose::testing::write_file;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("xnose_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

  fs::path dir_;
};

const std::string kCorpus = XNOSE_FIXTURES_DIR "/corpus";

TEST(Config, DefaultsAreTheModuleDefaults) {
  const CliConfig cfg;
  EXPECT_EQ(cfg.detectors, detect::DetectorConfig{});
  EXPECT_EQ(cfg.detectors.obscure_setup_threshold, 10);
  EXPECT_EQ(cfg.detectors.eager_test_threshold, 1);
  EXPECT_DOUBLE_EQ(cfg.detectors.cohesion_threshold, 0.4);
  EXPECT_EQ(cfg.output.format, "json");
  EXPECT_FALSE(cfg.output.fail_on_smell);
}

TEST_F(Scratch, ConfigFileOverridesDefaults) {
  write_file(path("x.toml"), "[detectors]\nobscure_setup_threshold = 5\n");
  const auto cfg = load_config(path("x.toml"));
  EXPECT_EQ(cfg.detectors.obscure_setup_threshold, 5);
  EXPECT_EQ(cfg.detectors.eager_test_threshold, 1);
}

TEST_F(Scratch, UnknownKeyIsAnError) {
  write_file(path("x.toml"), "[detectors]\nobscure_threshold = 5\n");
  EXPECT_THROW(load_config(path("x.toml")), ConfigError);
  const auto r = run_cli({"scan", kCorpus, "--config", path("x.toml")});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_NE(r.err.find("obscure_threshold"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Scratch, FullTomlSubset) {
  write_file(path("x.toml"), R"(# comment
[model]
assertion_receivers = ["Assert", 'Should']  # trailing comment
sleep_calls = [
  "Thread.Sleep",
  "Clock.Wait",
]

[detectors]
cohesion_threshold = 0.25
magic_number_deep = true
magic_number_allowlist = ["0", "1", "100"]

[output]
format = "text"
fail_on_smell = true
jobs = 3
)");
  const auto cfg = load_config(path("x.toml"));
  EXPECT_EQ(cfg.detectors.model.assertion_receivers, (std::vector<std::string>{"Assert", "Should"}));
  ASSERT_EQ(cfg.detectors.model.sleep_calls.size(), 2u);
  EXPECT_EQ(cfg.detectors.model.sleep_calls[1], (model::CallPattern{"Clock", "Wait"}));
  EXPECT_DOUBLE_EQ(cfg.detectors.cohesion_threshold, 0.25);
  EXPECT_TRUE(cfg.detectors.magic_number_deep);
  EXPECT_EQ(cfg.detectors.magic_number_allowlist.size(), 3u);
  EXPECT_EQ(cfg.output.format, "text");
  EXPECT_TRUE(cfg.output.fail_on_smell);
  EXPECT_EQ(cfg.output.jobs, 3u);
}

TEST_F(Scratch, JsonConfig) {
  write_file(path("x.json"), R"({"detectors": {"eager_test_threshold": 4}})");
  EXPECT_EQ(load_config(path("x.json")).detectors.eager_test_threshold, 4);
}

TEST(Config, Rejections) {
  auto rejects = [](const std::string& text) {
    try {
      CliConfig cfg;
      apply_config(parse_toml_subset(text), cfg);
    } catch (const ConfigError&) {
      return true;
    }
    return false;
  };
  EXPECT_TRUE(rejects("[nope]\nx = 1\n"));
  EXPECT_TRUE(rejects("[detectors]\nobscure_setup_threshold = \"ten\"\n"));
  EXPECT_TRUE(rejects("[detectors]\nobscure_setup_threshold = -1\n"));
  EXPECT_TRUE(rejects("[detectors]\ncohesion_threshold = 1.5\n"));
  EXPECT_TRUE(rejects("[detectors]\nduplicate_assert_compare = \"semantic\"\n"));
  EXPECT_TRUE(rejects("[detectors]\neager_test_threshold = 1\neager_test_threshold = 2\n"));
  EXPECT_TRUE(rejects("eager_test_threshold = 1\n"));
  EXPECT_TRUE(rejects("[output]\nformat = \"xml\"\n"));
  EXPECT_TRUE(rejects("[model]\nsleep_calls = [\"Thread.\"]\n"));
  EXPECT_TRUE(rejects("[detectors]\nmagic_number_deep = yes\n"));
  EXPECT_FALSE(rejects(""));
}

TEST(Cli, Version) {
  const auto r = run_cli({"--version"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("1.0.0"), std::string::npos);
}

TEST(Cli, BadUsage) {
  EXPECT_EQ(run_cli({}).code, kExitFatal);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitFatal);
  EXPECT_EQ(run_cli({"scan", kCorpus, "--format", "xml"}).code, kExitFatal);
}

TEST(Cli, ScanNonexistentPath) {
  const auto r = run_cli({"scan", "/nonexistent/xnose/dir"});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ScanCorpusMatchesGolden) {
  // The golden file was produced from the repository root.
  const auto r = run_cli({"scan", kCorpus, "--jobs", "2"});
  EXPECT_EQ(r.code, kExitOk);
  auto report = report::Json::parse(r.out);
  report["project"] = "tests/fixtures/corpus";
  EXPECT_EQ(report::dump_canonical(report), read_file(XNOSE_FIXTURES_DIR "/golden/corpus_report.json"));
  EXPECT_TRUE(r.err.empty()) << r.err;
}

TEST(Cli, FailOnSmell) {
  EXPECT_EQ(run_cli({"scan", kCorpus, "--fail-on-smell"}).code, kExitSmellsFound);
  EXPECT_EQ(run_cli({"scan", kCorpus + "/roulette_01.cs", "--fail-on-smell"}).code,
            kExitSmellsFound);
}

TEST_F(Scratch, CleanScanWithFailOnSmell) {
  write_file(path("src/T.cs"), "using Xunit; class T { [Fact] void M() { Assert.True(ok); } }");
  const auto r = run_cli({"scan", path("src"), "--fail-on-smell"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(report::Json::parse(r.out)["findings"].size(), 0u);
}

TEST_F(Scratch, FlagsOverrideFileAndEnvironment) {
  write_file(path("src/T.cs"), "using Xunit; class T { [Fact] void M() { Assert.True(ok); } }");
  write_file(path("env.toml"), "[output]\nformat = \"text\"\n");
  ::setenv("XNOSE_CONFIG", path("env.toml").c_str(), 1);
  const auto from_env = run_cli({"scan", path("src")});
  const auto flag = run_cli({"scan", path("src"), "--format", "json"});
  ::unsetenv("XNOSE_CONFIG");
  EXPECT_EQ(from_env.code, kExitOk);
  EXPECT_TRUE(from_env.out.empty());  // text format, nothing found
  EXPECT_NO_THROW(report::Json::parse(flag.out));
}

TEST_F(Scratch, OutFile) {
  const auto r = run_cli({"scan", kCorpus + "/sleepy_01.cs", "--out", path("r.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  const auto j = report::Json::parse(read_file(path("r.json")));
  EXPECT_EQ(j["totals"]["SleepyTest"], 1);
}

TEST(Cli, TextFormat) {
  const auto r = run_cli({"scan", kCorpus + "/sleepy_01.cs", "--format", "text"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out,
            "sleepy_01.cs:13:13 SleepyTest Fixtures.Sleepy.ThreadSleepTests.WaitsForBackgroundWork "
            "calls Thread.Sleep\n");
}

TEST(Cli, MalformedFileDoesNotAbort) {
  const auto r = run_cli({"scan", XNOSE_FIXTURES_DIR "/malformed"});
  EXPECT_EQ(r.code, kExitOk);
  const auto j = report::Json::parse(r.out);
  bool broken_reported = false;
  for (const auto& d : j["diagnostics"]) broken_reported |= d["file"] == "Broken.cs";
  EXPECT_TRUE(broken_reported);
  EXPECT_EQ(j["totals"]["SleepyTest"], 1);
  EXPECT_EQ(j["totals"]["AssertionRoulette"], 1);
  EXPECT_NE(r.err.find("Broken.cs:"), std::string::npos);
}

TEST_F(Scratch, EvalPredEqualsTruth) {
  ASSERT_EQ(run_cli({"scan", kCorpus, "--out", path("pred.json")}).code, kExitOk);
  const auto r = run_cli({"eval", "--pred", path("pred.json"), "--truth",
                          XNOSE_FIXTURES_DIR "/truth.json"});
  EXPECT_EQ(r.code, kExitOk);
  const auto m = report::Json::parse(r.out);
  ASSERT_EQ(m["kinds"].size(), detect::kSmellKindCount);
  for (const auto& k : m["kinds"]) {
    EXPECT_EQ(k["precision"], 1.0) << k["kind"];
    EXPECT_EQ(k["recall"], 1.0) << k["kind"];
    EXPECT_EQ(k["f1"], 1.0) << k["kind"];
  }
  const auto text = run_cli({"eval", "--pred", path("pred.json"), "--truth",
                             XNOSE_FIXTURES_DIR "/truth.json", "--format", "text"});
  EXPECT_NE(text.out.find("Average (unweighted)"), std::string::npos);
}

TEST_F(Scratch, EvalSchemaViolation) {
  ASSERT_EQ(run_cli({"scan", kCorpus, "--out", path("pred.json")}).code, kExitOk);
  write_file(path("truth.json"),
             R"([{"file": "a.cs", "suite": "S", "case": "c", "kind": "EagerTest"},
                 {"file": "a.cs", "suite": "S", "case": "c"}])");
  const auto r = run_cli({"eval", "--pred", path("pred.json"), "--truth", path("truth.json")});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_NE(r.err.find("/1/kind"), std::string::npos) << r.err;

  write_file(path("bad.json"), "{ not json");
  EXPECT_EQ(run_cli({"eval", "--pred", path("bad.json"), "--truth", path("truth.json")}).code,
            kExitFatal);
}

TEST_F(Scratch, StatsEmptyDirectory) {
  fs::create_directories(path("reports"));
  EXPECT_EQ(run_cli({"stats", "--reports", path("reports")}).code, kExitFatal);
  EXPECT_EQ(run_cli({"stats", "--reports", path("missing")}).code, kExitFatal);
}

TEST_F(Scratch, StatsOneEmptyReport) {
  fs::create_directories(path("empty"));
  ASSERT_EQ(run_cli({"scan", path("empty"), "--out", path("reports/r.json")}).code, kExitOk);
  const auto r = run_cli({"stats", "--reports", path("reports")});
  EXPECT_EQ(r.code, kExitOk);
  const auto j = report::Json::parse(r.out);
  EXPECT_EQ(j["projects"], 1);
  for (const auto& k : j["prevalence"]) {
    EXPECT_EQ(k["suite_fraction"], 0.0);
    EXPECT_EQ(k["project_fraction"], 0.0);
  }
}

// Two projects, enumerable by hand: P1 has suites {Sleepy}, {} and P2 has
// {Sleepy, Print}. Sleepy: 2/3 suites, 2/2 projects. Print: 1/3, 1/2.
TEST_F(Scratch, StatsTwoReports) {
  write_file(path("p1/A.cs"), R"(using Xunit;
class A { [Fact] void M() { Thread.Sleep(5); Assert.True(ok); } }
class B { [Fact] void M() { Assert.True(ok); } })");
  write_file(path("p2/C.cs"), R"(using Xunit;
class C { [Fact] void M() { Thread.Sleep(5); Console.WriteLine(x); Assert.True(ok); } })");
  ASSERT_EQ(run_cli({"scan", path("p1"), "--out", path("reports/p1.json")}).code, kExitOk);
  ASSERT_EQ(run_cli({"scan", path("p2"), "--out", path("reports/p2.json")}).code, kExitOk);
  const auto r = run_cli({"stats", "--reports", path("reports")});
  ASSERT_EQ(r.code, kExitOk);
  const auto j = report::Json::parse(r.out);
  EXPECT_EQ(j["projects"], 2);
  EXPECT_EQ(j["suites"], 3);
  for (const auto& k : j["prevalence"]) {
    if (k["kind"] == "SleepyTest") {
      EXPECT_EQ(k["suite_fraction"], 0.666667);
      EXPECT_EQ(k["project_fraction"], 1.0);
    } else if (k["kind"] == "RedundantPrint") {
      EXPECT_EQ(k["suite_fraction"], 0.333333);
      EXPECT_EQ(k["project_fraction"], 0.5);
    } else {
      EXPECT_EQ(k["suite_fraction"], 0.0) << k["kind"];
    }
  }
  const auto& co = j["cooccurrence"];
  EXPECT_EQ(co["histogram"]["0"], 0.333333);
  EXPECT_EQ(co["histogram"]["1"], 0.333333);
  EXPECT_EQ(co["histogram"]["2"], 0.333333);
  EXPECT_EQ(co["conditional"]["SleepyTest"]["RedundantPrint"], 0.5);
  EXPECT_EQ(co["conditional"]["RedundantPrint"]["SleepyTest"], 1.0);
  EXPECT_EQ(j["entities_per_project"]["suites"]["max"], 2);
}

}  // namespace
}  // namespace xnose::cli
