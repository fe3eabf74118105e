#include "lgt/layered_tree.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "lgt/errors.hpp"

namespace lgt {

namespace {

std::string describe(NodeId id) { return std::to_string(raw(id)); }

}  // namespace

LayeredTree::LayeredTree() {
  nodes_.push_back(Node{NodeId{0}, kNoParent, 0, true, {}, {}});
  index_of_.emplace(0, kRoot);
  frontier_.push_back(kRoot);
  preorder_.push_back(kRoot);
}

NodeIndex LayeredTree::index(NodeId id) const {
  auto found = find(id);
  if (!found) throw ContractViolation("unknown node id " + describe(id));
  return *found;
}

std::optional<NodeIndex> LayeredTree::find(NodeId id) const {
  auto it = index_of_.find(raw(id));
  if (it == index_of_.end()) return std::nullopt;
  return it->second;
}

void LayeredTree::rebuild_preorder() {
  preorder_.clear();
  preorder_.reserve(nodes_.size() - deactivated_edges_);
  std::vector<NodeIndex> stack{kRoot};
  while (!stack.empty()) {
    NodeIndex u = stack.back();
    stack.pop_back();
    preorder_.push_back(u);
    const auto& kids = nodes_[u].active_children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
}

void LayeredTree::validate(const LayerUpdate& update) const {
  std::uint64_t last_id = raw(max_id());
  for (std::size_t i = 0; i < update.entries.size(); ++i) {
    const auto& [child, parent] = update.entries[i];
    const std::string where = "entry " + std::to_string(i) + " of layer " +
                              std::to_string(current_layer_ + 1) + ": ";
    auto p = find(parent);
    if (!p) throw MalformedInput(where + "unknown parent " + describe(parent));
    if (nodes_[*p].layer != current_layer_ || !nodes_[*p].active) {
      throw MalformedInput(where + "parent " + describe(parent) + " is not in the last layer");
    }
    if (raw(child) <= last_id) {
      throw MalformedInput(where + "child id " + describe(child) +
                           " is not fresh (ids must strictly increase)");
    }
    last_id = raw(child);
  }
}

std::vector<DeactivationRecord> LayeredTree::apply_layer(const LayerUpdate& update) {
  if (update.entries.empty()) throw TraversalTerminated(current_layer_ + 1);
  validate(update);

  const std::vector<NodeIndex> previous = std::move(frontier_);
  frontier_.clear();
  const auto next_layer = static_cast<std::uint32_t>(current_layer_ + 1);
  for (const auto& [child, parent] : update.entries) {
    const NodeIndex p = index_of_.at(raw(parent));
    const auto u = static_cast<NodeIndex>(nodes_.size());
    nodes_.push_back(Node{child, p, next_layer, true, {}, {}});
    index_of_.emplace(raw(child), u);
    nodes_[p].children.push_back(u);
    nodes_[p].active_children.push_back(u);
    frontier_.push_back(u);
  }
  current_layer_ = next_layer;
  max_layer_size_ = std::max(max_layer_size_, frontier_.size());

  std::vector<DeactivationRecord> records;
  try {
    for (NodeIndex leaf : previous) {
      if (nodes_[leaf].active_children.empty()) {
        records.push_back({nodes_[leaf].id, prune(leaf)});
      }
    }
  } catch (const TraversalTerminated&) {
    rebuild_preorder();
    throw;
  }
  rebuild_preorder();
  return records;
}

std::size_t LayeredTree::exclusive_chain_length(NodeIndex leaf) const {
  if (!is_leaf(leaf)) throw ContractViolation("node " + describe(id(leaf)) + " is not an active leaf");
  std::size_t d = 1;
  NodeIndex u = leaf;
  while (nodes_[u].parent != kRoot && nodes_[nodes_[u].parent].active_children.size() == 1) {
    u = nodes_[u].parent;
    ++d;
  }
  return d;
}

std::size_t LayeredTree::deactivate_leaf(NodeIndex leaf) {
  const std::size_t d = prune(leaf);
  rebuild_preorder();
  return d;
}

std::size_t LayeredTree::prune(NodeIndex leaf) {
  if (leaf == kRoot) throw ContractViolation("cannot deactivate the root");
  const std::size_t d = exclusive_chain_length(leaf);
  NodeIndex top = leaf;
  for (std::size_t i = 1; i < d; ++i) top = nodes_[top].parent;
  if (nodes_[top].parent == kRoot && nodes_[kRoot].active_children.size() == 1) {
    throw TraversalTerminated(current_layer_);
  }

  NodeIndex u = leaf;
  for (std::size_t i = 0; i < d; ++i) {
    nodes_[u].active = false;
    u = nodes_[u].parent;
  }
  auto& siblings = nodes_[u].active_children;
  siblings.erase(std::find(siblings.begin(), siblings.end(), top));
  if (auto it = std::find(frontier_.begin(), frontier_.end(), leaf); it != frontier_.end()) {
    frontier_.erase(it);
  }
  deactivated_edges_ += d;
  return d;
}

NodeIndex LayeredTree::lowest_common_ancestor(NodeIndex a, NodeIndex b) const {
  while (nodes_[a].layer > nodes_[b].layer) a = nodes_[a].parent;
  while (nodes_[b].layer > nodes_[a].layer) b = nodes_[b].parent;
  while (a != b) {
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return a;
}

std::size_t LayeredTree::distance(NodeIndex a, NodeIndex b) const {
  const NodeIndex c = lowest_common_ancestor(a, b);
  return nodes_[a].layer + nodes_[b].layer - 2 * std::size_t{nodes_[c].layer};
}

LayerUpdate reduce_to_tree(const LayeredTree& tree, std::span<const RawLayerEntry> raw_entries) {
  LayerUpdate update;
  update.entries.reserve(raw_entries.size());
  for (const auto& entry : raw_entries) {
    if (entry.parents.empty()) {
      throw MalformedInput("node " + describe(entry.child) + " lists no parent");
    }
    for (NodeId p : entry.parents) {
      auto idx = tree.find(p);
      if (!idx || tree.layer(*idx) != tree.current_layer() || !tree.is_active(*idx)) {
        throw MalformedInput("node " + describe(entry.child) + " lists parent " + describe(p) +
                             " outside the last layer");
      }
    }
    update.entries.push_back({entry.child, entry.parents.front()});
  }
  return update;
}

HeightProfile heights(const LayeredTree& tree) {
  HeightProfile profile{std::vector<double>(tree.node_count(), 0.0)};
  const auto t = static_cast<double>(tree.current_layer());
  for (NodeIndex u : tree.active_preorder()) {
    profile[u] = t - static_cast<double>(tree.layer(u));
  }
  return profile;
}

std::vector<std::size_t> subtree_leaf_counts(const LayeredTree& tree) {
  std::vector<std::size_t> counts(tree.node_count(), 0);
  const auto order = tree.active_preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeIndex u = *it;
    if (tree.is_leaf(u)) {
      counts[u] = 1;
    } else {
      for (NodeIndex v : tree.active_children(u)) counts[u] += counts[v];
    }
  }
  return counts;
}

}  // namespace lgt
