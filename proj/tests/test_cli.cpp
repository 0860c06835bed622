#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pqnehari/cli.hpp"
#include "pqnehari/config.hpp"
#include "pqnehari/errors.hpp"

namespace pqnehari {
namespace {

namespace fs = std::filesystem;

// Fresh scratch directory per test, removed on teardown.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("pqnehari_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Coarse grid and few samples keep the end-to-end runs short.
  RunManifest manifest(Command command, const std::string& sub) const {
    RunManifest m;
    m.command = command;
    m.out_dir = (dir_ / sub).string();
    m.overrides = {"grid.nodes_per_axis=128", "solver.multistart=2", "verify.samples=10",
                   "sweep.threshold_steps=0"};
    return m;
  }

  int run_quiet(const RunManifest& m) {
    out_.str("");
    err_.str("");
    return run(m, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

TEST(Config, FormatParseRoundTrip) {
  RunConfig config;
  config.problem.lambda.base_level = 0.1 + 0.2;  // not exactly representable in short form
  config.problem.a.family = PotentialFamily::kPeriodicTrig;
  config.problem.a.modulation_amplitude = 1.0 / 3.0;
  config.problem.f.kind = NonlinearityKind::kTabulated;
  config.problem.f.table = {{0.0, 0.0}, {1.0, 0.5}, {2.0, 3.0}};
  config.solver.metric = DescentMetric::kSobolev;
  config.asymptotic[2].shape = DecayShape::kGaussian;
  const std::string text = format_config(config);
  std::istringstream in(text);
  const RunConfig back = parse_config(in);
  EXPECT_EQ(format_config(back), text);
  EXPECT_EQ(back.problem.lambda.base_level, 0.1 + 0.2);
  EXPECT_EQ(back.problem.f.table.size(), 3u);
}

TEST(Config, EveryKeyIsReadable) {
  const RunConfig config;
  for (const auto& key : config_keys()) EXPECT_NO_THROW(get_config_value(config, key)) << key;
  EXPECT_EQ(get_config_value(config, "problem.q"), "3");
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
  RunConfig config;
  EXPECT_THROW(apply_override(config, "solver.speed=3"), ConfigError);
  EXPECT_THROW(apply_override(config, "problem.p"), ConfigError);
  EXPECT_THROW(apply_override(config, "problem.p=two"), ConfigError);
  EXPECT_THROW(apply_override(config, "solver.metric=newton"), ConfigError);
  std::istringstream in("[problem]\nr = 3\n");
  EXPECT_THROW(parse_config(in), ConfigError);
  apply_override(config, "problem.p = 2.5");
  EXPECT_EQ(config.problem.exponents.p, 2.5);
}

TEST(Config, CommentsAndPartialSections) {
  std::istringstream in("# comment\n[solver]\n; line comment\nseed = 7\n\n[grid]\nhalf_width = 8\n");
  const RunConfig config = parse_config(in);
  EXPECT_EQ(config.solver.seed, 7u);
  EXPECT_EQ(config.problem.grid.half_width, 8.0);
  EXPECT_EQ(config.problem.exponents.q, 3.0);
}

TEST_F(CliTest, VerifyPassesAndEchoesItsConfig) {
  RunManifest m = manifest(Command::kVerify, "first");
  m.seed = 42;
  ASSERT_EQ(run_quiet(m), kExitOk) << out_.str() << err_.str();
  const auto report = nlohmann::json::parse(slurp(dir_ / "first" / "verify.json"));
  EXPECT_EQ(report["command"], "verify");
  EXPECT_EQ(report["seed"], 42);
  EXPECT_EQ(report["report"]["checks"].size(), 11u);

  // The echoed effective config alone reproduces the report.
  RunManifest again;
  again.command = Command::kVerify;
  again.config_path = (dir_ / "first" / "effective.cfg").string();
  again.out_dir = (dir_ / "second").string();
  ASSERT_EQ(run_quiet(again), kExitOk) << err_.str();
  EXPECT_EQ(slurp(dir_ / "first" / "verify.json"), slurp(dir_ / "second" / "verify.json"));
  EXPECT_EQ(slurp(dir_ / "first" / "effective.cfg"), slurp(dir_ / "second" / "effective.cfg"));
}

TEST_F(CliTest, ExponentIdentityViolationIsAConfigError) {
  write_file(dir_ / "bad.cfg", "[problem]\np = 2\nq = 3\nalpha = 1\nbeta = 1\n");
  RunManifest m = manifest(Command::kSolve, "out");
  m.config_path = (dir_ / "bad.cfg").string();
  EXPECT_EQ(run_quiet(m), kExitConfig);
  EXPECT_NE(err_.str().find("alpha/p + beta/q"), std::string::npos) << err_.str();
}

TEST_F(CliTest, MissingConfigFileIsAConfigError) {
  RunManifest m = manifest(Command::kSolve, "out");
  m.config_path = (dir_ / "absent.cfg").string();
  EXPECT_EQ(run_quiet(m), kExitConfig);
}

TEST_F(CliTest, UnwritableOutputDirectoryIsAConfigError) {
  write_file(dir_ / "blocker", "not a directory");
  RunManifest m = manifest(Command::kSolve, "blocker/inner");
  EXPECT_EQ(run_quiet(m), kExitConfig);
  EXPECT_NE(err_.str().find("not writable"), std::string::npos) << err_.str();
}

TEST_F(CliTest, SolveWritesReportAndFields) {
  const RunManifest m = manifest(Command::kSolve, "solve");
  ASSERT_EQ(run_quiet(m), kExitOk) << err_.str();
  const auto report = nlohmann::json::parse(slurp(dir_ / "solve" / "solve.json"));
  EXPECT_TRUE(report["best"]["converged"].get<bool>());
  EXPECT_FALSE(report["best"]["trace"].empty());
  EXPECT_EQ(report["runs"].size(), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "solve" / "u.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "solve" / "v.csv"));
}

TEST_F(CliTest, NonConvergedSolveNamesTheTrace) {
  RunManifest m = manifest(Command::kSolve, "stalled");
  m.overrides.push_back("solver.max_iters=1");
  EXPECT_EQ(run_quiet(m), kExitFailure);
  EXPECT_NE(out_.str().find("solve.json"), std::string::npos) << out_.str();
}

TEST_F(CliTest, ProjectReloadsFieldDumps) {
  ASSERT_EQ(run_quiet(manifest(Command::kSolve, "solve")), kExitOk) << err_.str();
  RunManifest m = manifest(Command::kProject, "project");
  m.u_path = (dir_ / "solve" / "u.csv").string();
  m.v_path = (dir_ / "solve" / "v.csv").string();
  ASSERT_EQ(run_quiet(m), kExitOk) << err_.str();
  const auto report = nlohmann::json::parse(slurp(dir_ / "project" / "project.json"));
  // A converged minimizer already lies on the manifold.
  EXPECT_NEAR(report["fibering"]["t0"].get<double>(), 1.0, 1e-6);
}

TEST_F(CliTest, CompareEmitsComparisons) {
  ASSERT_EQ(run_quiet(manifest(Command::kCompare, "compare")), kExitOk) << err_.str();
  const auto report = nlohmann::json::parse(slurp(dir_ / "compare" / "compare.json"));
  ASSERT_TRUE(report.contains("comparisons"));
  EXPECT_TRUE(report["comparisons"].contains("semitrivial"));
  EXPECT_TRUE(report["comparisons"]["periodic_asymptotic"]["strict"].get<bool>());
}

TEST_F(CliTest, SweepWritesOneRowPerValue) {
  RunManifest m = manifest(Command::kSweep, "sweep");
  m.sweep_param = "lambda0";
  m.sweep_from = 0.0;
  m.sweep_to = 2.0;
  m.sweep_steps = 9;
  ASSERT_EQ(run_quiet(m), kExitOk) << err_.str();
  std::istringstream csv(slurp(dir_ / "sweep" / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "lambda0,coupled_level,min_scalar_level,verdict");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 9);
}

TEST_F(CliTest, SweepRejectsUnknownParameter) {
  RunManifest m = manifest(Command::kSweep, "sweep");
  m.sweep_param = "gamma";
  EXPECT_EQ(run_quiet(m), kExitConfig);
}

TEST(MainEntry, UnknownFlagIsAConfigError) {
  const char* argv[] = {"pqnehari", "solve", "--bogus"};
  testing::internal::CaptureStderr();
  testing::internal::CaptureStdout();
  const int code = main_entry(3, argv);
  testing::internal::GetCapturedStdout();
  testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, kExitConfig);
}

}  // namespace
}  // namespace pqnehari
