#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lgt/report.hpp"

namespace lgt {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lgt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("lgt_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const char* name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

TEST_F(CliTest, GenThenRunWritesOneRowPerLayer) {
  auto gen = run_cli({"gen", "star", "--width", "3", "--depth", "5", "-o", path("star.json")});
  ASSERT_EQ(gen.code, cli::kExitOk) << gen.err;
  auto run = run_cli({"run", "--policy", "entropic", "--instance", path("star.json"), "--report",
                      path("r.csv"), "--format", "csv"});
  ASSERT_EQ(run.code, cli::kExitOk) << run.err;
  const std::string csv = slurp(path("r.csv"));
  EXPECT_EQ(count_lines(csv), 6u);
  EXPECT_EQ(csv.substr(0, kCsvHeader.size()), kCsvHeader);
}

TEST_F(CliTest, RunJsonReport) {
  run_cli({"gen", "comb", "--width", "2", "--depth", "10", "-o", path("comb.json")});
  auto run = run_cli({"run", "--policy", "random_dfs", "--instance", path("comb.json"), "--mode",
                      "randomized", "--trials", "50", "--seed", "3", "--report", path("r.json"),
                      "--format", "json"});
  ASSERT_EQ(run.code, cli::kExitOk) << run.err;
  const auto traces = traces_from_json(slurp(path("r.json")));
  ASSERT_EQ(traces.size(), 1u);
  EXPECT_EQ(traces[0].steps.size(), 10u);
  EXPECT_NE(run.out.find("trials=50"), std::string::npos);
}

TEST_F(CliTest, VerifyPrintsPassLines) {
  auto verify = run_cli({"verify", "--suite", "all", "--seed", "42"});
  EXPECT_EQ(verify.code, cli::kExitOk) << verify.out << verify.err;
  EXPECT_GE(count_occurrences(verify.out, "PASS"), 8u);
  EXPECT_EQ(count_occurrences(verify.out, "FAIL"), 0u);
}

TEST_F(CliTest, AdversaryOfWidthOneIsAChain) {
  auto run = run_cli({"run", "--policy", "entropic", "--adversary", "max_mass", "--width", "1",
                      "--depth", "20", "--report", path("r.csv")});
  ASSERT_EQ(run.code, cli::kExitOk) << run.err;
  EXPECT_NE(run.out.find("ratio=1"), std::string::npos) << run.out;
}

TEST_F(CliTest, BenchWritesEveryCombination) {
  auto bench = run_cli({"bench", "--widths", "2,4", "--depth", "30", "--policies", "entropic,dfs",
                        "--families", "star,alternating", "--report", path("b.json"), "--format",
                        "json"});
  ASSERT_EQ(bench.code, cli::kExitOk) << bench.err;
  EXPECT_EQ(traces_from_json(slurp(path("b.json"))).size(), 8u);
}

TEST_F(CliTest, BadArgumentsExitOne) {
  EXPECT_EQ(run_cli({"run", "--policy", "greedy", "--instance", "x", "--report", path("r")}).code,
            cli::kExitError);
  EXPECT_EQ(run_cli({"gen", "pyramid", "--depth", "5", "-o", path("x.json")}).code, cli::kExitError);
  EXPECT_EQ(run_cli({"run", "--policy", "dfs", "--instance", path("missing.json"), "--report",
                     path("r")})
                .code,
            cli::kExitError);
  EXPECT_EQ(run_cli({"verify", "--suite", "everything"}).code, cli::kExitError);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitError);
  EXPECT_EQ(run_cli({}).code, cli::kExitError);
}

TEST_F(CliTest, MalformedInstanceReportsLine) {
  std::ofstream(path("bad.json")) << "{\n  \"name\": \"x\",\n  \"width\": 1,\n  \"seed\": null,\n"
                                     "  \"layers\": [\n    [[1, 0]],\n    [[2, 7]]\n  ]\n}\n";
  auto run = run_cli({"run", "--policy", "dfs", "--instance", path("bad.json"), "--report", path("r")});
  EXPECT_EQ(run.code, cli::kExitError);
  EXPECT_NE(run.err.find("line 7"), std::string::npos) << run.err;
  EXPECT_NE(run.err.find("layers[1]"), std::string::npos) << run.err;
}

}  // namespace
}  // namespace lgt
