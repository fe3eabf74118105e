#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lgt/errors.hpp"
#include "lgt/harness.hpp"
#include "lgt/report.hpp"
#include "test_support.hpp"

namespace lgt {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST(RunFractional, ChainHasRatioOneAndSlackFiveT) {
  const Trace trace = run_fractional(testing::chain_instance(30), RunConfig{});
  ASSERT_EQ(trace.steps.size(), 30u);
  for (const auto& step : trace.steps) {
    EXPECT_EQ(step.ratio, 1.0);
    EXPECT_EQ(step.opt, step.t);
    ASSERT_TRUE(step.potential.has_value());
    // w = 1: P(t) = 6t against cost t.
    EXPECT_NEAR(*step.slack(), 5.0 * static_cast<double>(step.t), 1e-12);
  }
  EXPECT_EQ(trace.run_id, "entropic/chain/fractional");
  EXPECT_FALSE(potential_violated(trace));
}

TEST(RunFractional, StarIsMonitoredAndBounded) {
  const Trace trace = run_fractional(gen_star(3, 50), RunConfig{});
  EXPECT_EQ(trace.width, 3u);
  EXPECT_FALSE(potential_violated(trace));
  const double ln3 = std::log(3.0);
  for (const auto& step : trace.steps) {
    EXPECT_GE(*step.slack(), 0.0);
    EXPECT_LE(step.ratio, 4 + 6 * (1 + ln3) * (1 + ln3));
  }
  EXPECT_EQ(trace.steps.back().deactivated_edges, 48u + 49u);
}

TEST(RunFractional, MonitorDefaultsByPolicy) {
  RunConfig config;
  config.policy = PolicyKind::uniform;
  EXPECT_FALSE(config.monitoring());
  const Trace off = run_fractional(gen_star(2, 5), config);
  for (const auto& step : off.steps) EXPECT_FALSE(step.potential.has_value());
  config.potential_monitor = true;
  const Trace on = run_fractional(gen_star(2, 5), config);
  for (const auto& step : on.steps) EXPECT_TRUE(step.potential.has_value());
}

TEST(RunFractional, CumulativeCostIsSumOfDeltas) {
  const Trace trace = run_fractional(gen_random(4, 40, 3, 0.4, 0.25), RunConfig{});
  double sum = 0.0;
  for (const auto& step : trace.steps) {
    sum += step.cost_delta;
    EXPECT_NEAR(step.cumulative_cost, sum, 1e-9);
    EXPECT_NEAR(step.ratio, step.cumulative_cost / static_cast<double>(step.opt), 1e-12);
  }
}

TEST(PotentialViolated, ToleranceScalesWithT) {
  Trace trace;
  StepRecord step;
  step.t = 10;
  step.cumulative_cost = 5.0;
  step.potential = PotentialBreakdown{0, 0, 0, 5.0 - 0.5e-5};
  trace.steps.push_back(step);
  EXPECT_FALSE(potential_violated(trace));
  trace.steps[0].potential->total = 5.0 - 2e-5;
  EXPECT_TRUE(potential_violated(trace));
}

TEST(RunRandomized, ChainCostsExactlyT) {
  RunConfig config;
  config.mode = RunMode::randomized;
  config.trials = 50;
  config.seed = 4;
  const auto result = run_randomized(testing::chain_instance(12), config);
  EXPECT_EQ(result.mean_cost, 12.0);
  EXPECT_EQ(result.stderr_cost, 0.0);
  EXPECT_EQ(result.trace.run_id, "entropic/chain/randomized/seed=4");
}

TEST(RunRandomized, DfsHasZeroVariance) {
  RunConfig config;
  config.policy = PolicyKind::dfs;
  config.mode = RunMode::randomized;
  config.trials = 30;
  const auto result = run_randomized(gen_star(3, 12), config);
  EXPECT_EQ(result.stderr_cost, 0.0);
  EXPECT_EQ(result.mean_cost, result.fractional_cost);
}

TEST(RunRandomized, MatchesFractionalWithinThreeStderr) {
  RunConfig config;
  config.mode = RunMode::randomized;
  config.trials = 2000;
  config.seed = 99;
  const auto result = run_randomized(gen_star(3, 20), config);
  EXPECT_LE(result.marginal_error, 1e-9);
  EXPECT_GT(result.stderr_cost, 0.0);
  EXPECT_NEAR(result.mean_cost, result.fractional_cost, 3 * result.stderr_cost);
  EXPECT_EQ(result.costs.size(), 2000u);
}

TEST(RunRandomized, SameSeedSameResult) {
  RunConfig config;
  config.policy = PolicyKind::random_dfs;
  config.mode = RunMode::randomized;
  config.trials = 20;
  config.seed = 5;
  const Instance inst = gen_comb(3, 20);
  EXPECT_EQ(run_randomized(inst, config).costs, run_randomized(inst, config).costs);
}

TEST(Report, CsvHeaderAndRows) {
  const Trace trace = run_fractional(gen_star(3, 5), RunConfig{});
  const auto lines = lines_of(to_csv(std::span(&trace, 1)));
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], kCsvHeader);
  EXPECT_EQ(lines[1].rfind("\"entropic/star(w=3,t=5)/fractional\",entropic,\"star(w=3,t=5)\",1,3,0,1,1,1,1,", 0), 0u)
      << lines[1];
}

TEST(Report, CsvLeavesPotentialEmptyWhenUnmonitored) {
  RunConfig config;
  config.policy = PolicyKind::dfs;
  const Trace trace = run_fractional(testing::chain_instance(2), config);
  const auto lines = lines_of(to_csv(std::span(&trace, 1)));
  EXPECT_EQ(lines[1], "dfs/chain/fractional,dfs,chain,1,1,0,1,1,1,1,,");
}

TEST(Report, JsonRoundTripIsByteExact) {
  RunConfig uniform;
  uniform.policy = PolicyKind::uniform;
  std::vector<Trace> traces{run_fractional(gen_random(4, 20, 8, 0.4, 0.2), RunConfig{}),
                            run_fractional(gen_alternating(6), uniform)};
  const std::string text = to_json(traces);
  const auto back = traces_from_json(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(to_json(back), text);
  EXPECT_EQ(back[1].policy, PolicyKind::uniform);
  EXPECT_FALSE(back[1].steps[0].potential.has_value());
}

TEST(Report, WriteFileErrorsAndAtomicity) {
  const Trace trace = run_fractional(gen_star(2, 3), RunConfig{});
  EXPECT_THROW(write_report(std::span(&trace, 1), ReportFormat::csv, "/nonexistent/dir/r.csv"),
               IoError);
  const auto path = std::filesystem::temp_directory_path() / "lgt_report_test.csv";
  write_report(std::span(&trace, 1), ReportFormat::csv, path);
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), to_csv(std::span(&trace, 1)));
  std::filesystem::remove(path);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::json);
  EXPECT_FALSE(parse_report_format("xml").has_value());
}

TEST(Harness, ModeAndSourceNames) {
  EXPECT_EQ(parse_run_mode("randomized"), RunMode::randomized);
  EXPECT_FALSE(parse_run_mode("sampled").has_value());
  EXPECT_EQ(parse_width_source(to_string(WidthSource::running_max)), WidthSource::running_max);
}

}  // namespace
}  // namespace lgt
