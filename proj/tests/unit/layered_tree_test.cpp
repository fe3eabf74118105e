#include <gtest/gtest.h>

#include "lgt/errors.hpp"
#include "lgt/layered_tree.hpp"
#include "lgt/random.hpp"
#include "lgt/verify.hpp"
#include "test_support.hpp"

namespace lgt {
namespace {

using testing::at;
using testing::layer;
using testing::T1;

TEST(LayeredTree, FreshTreeIsRootOnly) {
  LayeredTree tree;
  EXPECT_EQ(tree.node_count(), 1u);
  EXPECT_EQ(tree.current_layer(), 0u);
  EXPECT_EQ(tree.deactivated_edges(), 0u);
  ASSERT_EQ(tree.last_layer().size(), 1u);
  EXPECT_EQ(tree.last_layer()[0], kRoot);
  EXPECT_EQ(raw(tree.id(kRoot)), 0u);
}

TEST(LayeredTree, T1PrunesExclusiveChains) {
  LayeredTree tree = T1::tree();
  const auto records = tree.apply_layer(layer({{6, T1::a1}}));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0], (DeactivationRecord{NodeId{T1::a2}, 1}));
  EXPECT_EQ(records[1], (DeactivationRecord{NodeId{T1::b1}, 2}));
  EXPECT_EQ(tree.deactivated_edges(), 3u);
  EXPECT_FALSE(tree.is_active(at(tree, T1::b)));
  EXPECT_FALSE(tree.is_active(at(tree, T1::b1)));
  EXPECT_TRUE(tree.is_active(at(tree, T1::a)));
  // Pruned nodes remain addressable.
  EXPECT_EQ(tree.node_count(), 7u);
}

TEST(LayeredTree, ChainGrowthHasNoDeadEnds) {
  LayeredTree tree = testing::chain(1);
  EXPECT_TRUE(tree.apply_layer(layer({{2, 1}})).empty());
  EXPECT_EQ(tree.current_layer(), 2u);
}

TEST(LayeredTree, StarWithAllEndpointsExtendedHasNoDeadEnds) {
  LayeredTree tree;
  tree.apply_layer(layer({{1, 0}, {2, 0}}));
  EXPECT_TRUE(tree.apply_layer(layer({{3, 1}, {4, 2}})).empty());
}

TEST(LayeredTree, RejectsParentOutsideLastLayer) {
  LayeredTree tree = T1::tree();
  EXPECT_THROW(tree.apply_layer(layer({{6, T1::a}})), MalformedInput);
  EXPECT_THROW(tree.apply_layer(layer({{6, 99}})), MalformedInput);
  EXPECT_EQ(tree.current_layer(), 2u);
}

TEST(LayeredTree, RejectsStaleOrRepeatedIds) {
  LayeredTree tree = T1::tree();
  EXPECT_THROW(tree.apply_layer(layer({{5, T1::a1}})), MalformedInput);
  EXPECT_THROW(tree.apply_layer(layer({{7, T1::a1}, {7, T1::a2}})), MalformedInput);
  EXPECT_THROW(tree.apply_layer(layer({{8, T1::a1}, {7, T1::a2}})), MalformedInput);
}

TEST(LayeredTree, EmptyUpdateTerminates) {
  LayeredTree tree = T1::tree();
  EXPECT_THROW(tree.apply_layer(LayerUpdate{}), TraversalTerminated);
}

TEST(LayeredTree, DeactivatingTheLastLeafTerminates) {
  LayeredTree tree = testing::chain(3);
  EXPECT_THROW(tree.deactivate_leaf(at(tree, 3)), TraversalTerminated);
}

TEST(LayeredTree, Heights) {
  const LayeredTree tree = T1::tree();
  const HeightProfile h = heights(tree);
  EXPECT_EQ(h[kRoot], 2.0);
  EXPECT_EQ(h[at(tree, T1::a)], 1.0);
  EXPECT_EQ(h[at(tree, T1::b)], 1.0);
  EXPECT_EQ(h[at(tree, T1::a1)], 0.0);
  EXPECT_EQ(h[at(tree, T1::b1)], 0.0);

  EXPECT_EQ(heights(testing::chain(5))[kRoot], 5.0);

  LayeredTree next = T1::tree();
  next.apply_layer(layer({{6, T1::a1}, {7, T1::b1}}));
  EXPECT_EQ(heights(next)[kRoot], 3.0);
}

TEST(LayeredTree, SubtreeLeafCounts) {
  LayeredTree tree = T1::tree();
  auto counts = subtree_leaf_counts(tree);
  EXPECT_EQ(counts[kRoot], 3u);
  EXPECT_EQ(counts[at(tree, T1::a)], 2u);
  EXPECT_EQ(counts[at(tree, T1::b)], 1u);

  const auto chain = testing::chain(4);
  for (NodeIndex u : chain.active_preorder()) EXPECT_EQ(subtree_leaf_counts(chain)[u], 1u);

  tree.deactivate_leaf(at(tree, T1::b1));
  counts = subtree_leaf_counts(tree);
  EXPECT_EQ(counts[kRoot], 2u);
  EXPECT_EQ(counts[at(tree, T1::a)], 2u);
}

TEST(LayeredTree, ReduceToTreeKeepsFirstParent) {
  const LayeredTree tree = T1::tree();
  const std::vector<RawLayerEntry> raw_entries{{NodeId{6}, {NodeId{T1::a1}}},
                                               {NodeId{7}, {NodeId{T1::b1}, NodeId{T1::a1}}}};
  const LayerUpdate update = reduce_to_tree(tree, raw_entries);
  EXPECT_EQ(update, layer({{6, T1::a1}, {7, T1::b1}}));

  // Order of the non-first parents does not matter.
  const std::vector<RawLayerEntry> permuted{{NodeId{6}, {NodeId{T1::a1}}},
                                            {NodeId{7}, {NodeId{T1::b1}, NodeId{T1::a2}, NodeId{T1::a1}}}};
  EXPECT_EQ(reduce_to_tree(tree, permuted), update);
}

TEST(LayeredTree, ReduceToTreeErrors) {
  const LayeredTree tree = T1::tree();
  const std::vector<RawLayerEntry> no_parent{{NodeId{6}, {}}};
  EXPECT_THROW(reduce_to_tree(tree, no_parent), MalformedInput);
  const std::vector<RawLayerEntry> unknown{{NodeId{6}, {NodeId{42}}}};
  EXPECT_THROW(reduce_to_tree(tree, unknown), MalformedInput);
  const std::vector<RawLayerEntry> too_high{{NodeId{6}, {NodeId{T1::a}}}};
  EXPECT_THROW(reduce_to_tree(tree, too_high), MalformedInput);
}

TEST(LayeredTree, DistanceAndAncestor) {
  const LayeredTree tree = T1::tree();
  EXPECT_EQ(tree.distance(at(tree, T1::a1), at(tree, T1::a2)), 2u);
  EXPECT_EQ(tree.distance(at(tree, T1::a1), at(tree, T1::b1)), 4u);
  EXPECT_EQ(tree.distance(kRoot, at(tree, T1::b1)), 2u);
  EXPECT_EQ(tree.lowest_common_ancestor(at(tree, T1::a1), at(tree, T1::a2)), at(tree, T1::a));
}

// Properties over random runs: no internal dead wood, L(t) equals the sum of
// all d, and the last layer is exactly the set of active leaves.
TEST(LayeredTreeProperty, RandomRunsKeepInvariants) {
  Rng rng = substream(11, "layered_tree_property");
  for (int run = 0; run < 200; ++run) {
    const std::uint64_t seed = rng();
    const Instance instance = gen_random(6, 30, seed, 0.4, 0.3);
    LayeredTree tree;
    std::size_t total_d = 0;
    for (const auto& update : instance.layers) {
      for (const auto& record : tree.apply_layer(update)) {
        EXPECT_GE(record.d, 1u);
        total_d += record.d;
      }
      for (NodeIndex u : tree.active_preorder()) {
        if (tree.layer(u) < tree.current_layer()) {
          EXPECT_FALSE(tree.active_children(u).empty());
        } else {
          EXPECT_TRUE(tree.is_leaf(u));
        }
        if (u != kRoot) {
          EXPECT_TRUE(tree.is_active(tree.parent(u)));
        }
      }
      EXPECT_EQ(subtree_leaf_counts(tree)[kRoot], tree.last_layer().size());
      EXPECT_LE(tree.last_layer().size(), instance.width);
    }
    EXPECT_EQ(total_d, tree.deactivated_edges());
  }
}

}  // namespace
}  // namespace lgt
