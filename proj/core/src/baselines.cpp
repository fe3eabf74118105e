#include "lgt/baselines.hpp"

#include "lgt/errors.hpp"

namespace lgt {

Configuration random_dfs_conditionals(const LayeredTree& tree) {
  std::vector<double> cond(tree.node_count(), 0.0);
  for (NodeIndex u : tree.active_preorder()) {
    const auto kids = tree.active_children(u);
    for (NodeIndex v : kids) cond[v] = 1.0 / static_cast<double>(kids.size());
  }
  return Configuration::from_conditionals(tree, std::move(cond));
}

Configuration uniform_configuration(const LayeredTree& tree) {
  const auto leaves = tree.last_layer();
  if (leaves.empty()) throw ContractViolation("uniform configuration needs an active leaf");
  std::vector<double> leaf_mass(tree.node_count(), 0.0);
  for (NodeIndex u : leaves) leaf_mass[u] = 1.0 / static_cast<double>(leaves.size());
  return Configuration::from_leaf_masses(tree, leaf_mass);
}

namespace {

/// Lowest ancestor of `from` (inclusive) that is still active.
NodeIndex lowest_active_ancestor(const LayeredTree& tree, NodeIndex from) {
  NodeIndex a = from;
  while (!tree.is_active(a)) a = tree.parent(a);
  return a;
}

bool is_ancestor(const LayeredTree& tree, NodeIndex ancestor, NodeIndex node) {
  while (tree.layer(node) > tree.layer(ancestor)) node = tree.parent(node);
  return node == ancestor;
}

}  // namespace

Configuration DfsPolicy::configure(const LayeredTree& tree) {
  if (tree.last_layer().empty()) throw TraversalTerminated(tree.current_layer());
  if (tree.is_active(position_) && !tree.active_children(position_).empty()) {
    position_ = tree.active_children(position_).front();
  } else {
    const NodeIndex branch = lowest_active_ancestor(tree, position_);
    for (NodeIndex leaf : tree.last_layer()) {
      if (is_ancestor(tree, branch, leaf)) {
        position_ = leaf;
        break;
      }
    }
  }
  return Configuration::point_mass(tree, position_);
}

std::size_t RandomDfsWalker::advance(const LayeredTree& tree) {
  if (tree.last_layer().empty()) throw TraversalTerminated(tree.current_layer());
  const NodeIndex branch = lowest_active_ancestor(tree, position_);
  NodeIndex u = branch;
  while (tree.layer(u) < tree.current_layer()) {
    const auto kids = tree.active_children(u);
    u = kids[uniform_index(rng_, kids.size())];
  }
  const std::size_t walked = tree.distance(position_, u);
  position_ = u;
  total_cost_ += walked;
  return walked;
}

}  // namespace lgt
