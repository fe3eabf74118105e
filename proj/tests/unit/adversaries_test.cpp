#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>

#include "lgt/adversaries.hpp"
#include "lgt/errors.hpp"
#include "lgt/harness.hpp"
#include "lgt/instance_io.hpp"
#include "test_support.hpp"

namespace lgt {
namespace {

std::vector<std::size_t> layer_sizes(const Instance& inst) {
  std::vector<std::size_t> sizes;
  for (const auto& l : inst.layers) sizes.push_back(l.entries.size());
  return sizes;
}

// t + sum_{i=1}^{w-1} 2 (t - w + i): every chain but the last is walked down
// and back up again.
double dfs_lengths_cost(std::size_t w, std::size_t t) {
  double cost = static_cast<double>(t);
  for (std::size_t i = 1; i < w; ++i) cost += 2.0 * static_cast<double>(t - w + i);
  return cost;
}

TEST(GenStar, LayerSizes) {
  const Instance inst = gen_star(3, 5);
  EXPECT_EQ(layer_sizes(inst), (std::vector<std::size_t>{3, 3, 3, 2, 1}));
  EXPECT_EQ(inst.width, 3u);
  EXPECT_EQ(inst.name, "star(w=3,t=5)");
  EXPECT_NO_THROW(validate(inst));
}

TEST(GenStar, SingleChain) {
  EXPECT_EQ(layer_sizes(gen_star(1, 5)), (std::vector<std::size_t>(5, 1)));
  EXPECT_THROW(gen_star(4, 3), ContractViolation);
}

TEST(GenComb, EveryToothIsADeadEnd) {
  const Instance inst = gen_comb(2, 10);
  LayeredTree tree;
  std::size_t dead = 0;
  for (const auto& update : inst.layers) dead += tree.apply_layer(update).size();
  // Teeth at spine nodes k = 1..7 (k + 2 < 10).
  EXPECT_EQ(dead, 7u);
  EXPECT_EQ(tree.last_layer().size(), 1u);
  EXPECT_EQ(inst.width, 3u);
  EXPECT_EQ(inst.depth(), 10u);
  EXPECT_THROW(gen_comb(2, 4), ContractViolation);
}

TEST(GenComb, SpacingThinsTheTeeth) {
  const Instance inst = gen_comb(4, 40, 4);
  EXPECT_EQ(inst.name, "comb(w=4,t=40,spacing=4)");
  LayeredTree tree;
  std::size_t dead = 0;
  for (const auto& update : inst.layers) dead += tree.apply_layer(update).size();
  // k = 4, 8, ..., 32 with k + 4 < 40.
  EXPECT_EQ(dead, 8u);
  EXPECT_EQ(inst.width, 2u);
}

TEST(GenAlternating, WidthThreeAndFlippingSplits) {
  const Instance inst = gen_alternating(12);
  EXPECT_EQ(inst.width, 3u);
  const auto sizes = layer_sizes(inst);
  for (std::size_t k = 1; k < sizes.size(); ++k) EXPECT_EQ(sizes[k], 3u) << k;
  for (std::size_t t = 2; t <= 12; ++t) {
    const LayeredTree tree = replay(inst, t);
    const NodeIndex left = tree.active_children(kRoot)[0];
    const std::size_t left_count = subtree_leaf_counts(tree)[left];
    EXPECT_EQ(left_count, t % 2 == 1 ? 2u : 1u) << t;
  }
}

TEST(AdaptiveDfsLengths, CostFormula) {
  const std::vector<std::size_t> order{1, 0};
  const Instance inst = adaptive_dfs_lengths(2, 10, order);
  const LayeredTree tree = replay(inst);
  EXPECT_EQ(tree.deactivated_edges(), 9u);
  EXPECT_EQ(dfs_lengths_cost(2, 10), 28.0);
  const std::vector<std::size_t> bad{0, 0};
  EXPECT_THROW(adaptive_dfs_lengths(2, 10, bad), ContractViolation);
}

TEST(GenRandom, DeterministicAndWithinWidth) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Instance a = gen_random(5, 25, seed, 0.4, 0.25);
    ASSERT_LE(a.width, 5u);
    ASSERT_EQ(a.depth(), 25u);
    ASSERT_EQ(a.seed, seed);
    if (seed % 100 == 0) {
      EXPECT_EQ(a, gen_random(5, 25, seed, 0.4, 0.25));
      EXPECT_NO_THROW(validate(a));
    }
  }
  EXPECT_NE(gen_random(5, 25, 1, 0.4, 0.25), gen_random(5, 25, 2, 0.4, 0.25));
}

TEST(GenRandom, CertainDeathFails) {
  EXPECT_THROW(gen_random(3, 10, 1, 0.5, 1.0), GenerationFailed);
  EXPECT_THROW(gen_random(3, 10, 1, 1.5, 0.0), ContractViolation);
}

TEST(Validate, RejectsWrongWidth) {
  Instance inst = gen_star(3, 5);
  inst.width = 4;
  EXPECT_THROW(validate(inst), MalformedInput);
}

TEST(AdaptiveAdversary, KillsTheHeaviestEndpointOfUniform) {
  AdaptiveAdversary adversary(AdaptiveAdversary::Kind::max_mass_killer, 4, 20);
  RunConfig config;
  config.policy = PolicyKind::uniform;
  const Trace trace = run_fractional(adversary, config);
  ASSERT_EQ(trace.steps.size(), 20u);
  ASSERT_EQ(adversary.killed_mass().size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(adversary.killed_mass()[j], 1.0 / (4 - j), 1e-12);
  EXPECT_EQ(trace.steps.back().layer_size, 1u);
  EXPECT_EQ(trace.steps.back().opt, 20u);
}

TEST(AdaptiveAdversary, DfsLengthAssignerForcesTheFormula) {
  for (auto [w, t] : {std::pair<std::size_t, std::size_t>{2, 10}, {4, 100}, {4, 200}}) {
    AdaptiveAdversary adversary(AdaptiveAdversary::Kind::dfs_length_assigner, w, t);
    RunConfig config;
    config.policy = PolicyKind::dfs;
    const Trace trace = run_fractional(adversary, config);
    EXPECT_EQ(trace.final_cost(), dfs_lengths_cost(w, t)) << w << "," << t;
    EXPECT_GE(trace.final_cost(), static_cast<double>((2 * w - 1) * t - 2 * w * w));
  }
}

TEST(AdaptiveAdversary, DfsLengthAssignerNeedsAPointMass) {
  AdaptiveAdversary adversary(AdaptiveAdversary::Kind::dfs_length_assigner, 3, 10);
  RunConfig config;
  config.policy = PolicyKind::uniform;
  EXPECT_THROW(run_fractional(adversary, config), ContractViolation);
}

TEST(AdaptiveAdversary, RefusesToRunPastTheHorizon) {
  AdaptiveAdversary adversary(AdaptiveAdversary::Kind::max_mass_killer, 1, 3);
  LayeredTree tree = testing::chain(3);
  EXPECT_TRUE(adversary.finished(tree));
  EXPECT_THROW(adversary.next_layer(tree, Configuration::point_mass(tree, testing::at(tree, 3))),
               ContractViolation);
}

TEST(InstanceIo, RoundTrip) {
  for (const Instance& inst : {gen_star(3, 5), gen_comb(3, 20), gen_alternating(9),
                               gen_random(6, 30, 77, 0.4, 0.2)}) {
    const std::string text = to_json(inst);
    EXPECT_EQ(from_json(text), inst);
    EXPECT_EQ(to_json(from_json(text)), text);
  }
}

TEST(InstanceIo, GoldenFixturesMatchGenerators) {
  EXPECT_EQ(load_instance(testing::fixture("star_3_5.json")), gen_star(3, 5));
  EXPECT_EQ(load_instance(testing::fixture("comb_2_10.json")), gen_comb(2, 10));
  EXPECT_EQ(load_instance(testing::fixture("alternating_8.json")), gen_alternating(8));
}

ParseError parse_error(const std::string& text) {
  try {
    from_json(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError("", 0, "");
}

std::string star_text_with(const std::string& from, const std::string& to) {
  std::string text = to_json(gen_star(3, 5));
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos);
  return text.replace(pos, from.size(), to);
}

TEST(InstanceIo, ErrorsNameFieldAndLine) {
  // Line 1 "{", then name, width, seed, "layers": [ and one layer per line.
  auto e = parse_error(star_text_with("[5, 2]", "[5, \"x\"]"));
  EXPECT_EQ(e.field(), "layers[1][1]");
  EXPECT_EQ(e.line(), 7u);

  e = parse_error(star_text_with("[10, 8]", "[10, 1]"));
  EXPECT_EQ(e.field(), "layers[3]");
  EXPECT_EQ(e.line(), 9u);

  e = parse_error(star_text_with("\"width\": 3", "\"width\": 4"));
  EXPECT_EQ(e.field(), "width");
  EXPECT_EQ(e.line(), 3u);

  e = parse_error(star_text_with("[[12, 11]]", "[]"));
  EXPECT_EQ(e.field(), "layers[4]");
  EXPECT_EQ(e.line(), 10u);

  e = parse_error("{\"name\": \"x\", \"width\": 1, \"seed\": null}");
  EXPECT_EQ(e.field(), "layers");

  e = parse_error("{\n  \"name\": \"x\",\n  oops\n}");
  EXPECT_EQ(e.line(), 3u);
}

TEST(InstanceIo, FileErrors) {
  EXPECT_THROW(load_instance("/nonexistent/dir/x.json"), IoError);
  EXPECT_THROW(save_instance(gen_star(2, 3), "/nonexistent/dir/x.json"), IoError);

  const auto path = std::filesystem::temp_directory_path() / "lgt_instance_io_test.json";
  save_instance(gen_alternating(5), path);
  EXPECT_EQ(load_instance(path), gen_alternating(5));
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace lgt
