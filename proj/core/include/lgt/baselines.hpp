#pragma once

#include <cstdint>

#include "lgt/configuration.hpp"
#include "lgt/layered_tree.hpp"
#include "lgt/policy.hpp"
#include "lgt/random.hpp"

namespace lgt {

/// cond(u) = 1 / |active children of p(u)|: the fractional view of random DFS.
Configuration random_dfs_conditionals(const LayeredTree& tree);

/// Mass 1/k on each of the k active leaves.
Configuration uniform_configuration(const LayeredTree& tree);

/// Deterministic depth-first search. Descends into the smallest active child;
/// after a dead-end walks to the nearest last-layer node, smallest id first.
class DfsPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::dfs; }
  NodeIndex position() const noexcept { return position_; }

 protected:
  Configuration configure(const LayeredTree& tree) override;

 private:
  NodeIndex position_ = kRoot;
};

class RandomDfsPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::random_dfs; }

 protected:
  Configuration configure(const LayeredTree& tree) override { return random_dfs_conditionals(tree); }
};

class UniformPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::uniform; }

 protected:
  Configuration configure(const LayeredTree& tree) override { return uniform_configuration(tree); }
};

/// A single random-DFS agent. It keeps descending uniformly at random; at a
/// dead-end it climbs to the lowest ancestor that still has active branches
/// and picks among those branches uniformly, recursively down to the new layer.
/// Its position is distributed like random_dfs_conditionals at every layer.
class RandomDfsWalker {
 public:
  explicit RandomDfsWalker(Rng rng) : rng_(std::move(rng)) {}

  /// Moves to the tree's last layer; returns the number of edges walked.
  std::size_t advance(const LayeredTree& tree);

  NodeIndex position() const noexcept { return position_; }
  std::size_t total_cost() const noexcept { return total_cost_; }

 private:
  Rng rng_;
  NodeIndex position_ = kRoot;
  std::size_t total_cost_ = 0;
};

}  // namespace lgt
