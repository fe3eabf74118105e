#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace lgt {

/// External node identifier. The root is always NodeId{0}; other ids are
/// positive and strictly increasing in revelation order.
enum class NodeId : std::uint64_t {};

constexpr std::uint64_t raw(NodeId id) noexcept { return static_cast<std::uint64_t>(id); }

/// Dense storage slot of a node inside one LayeredTree. Because ids increase
/// with insertion order, ascending NodeIndex is ascending NodeId.
using NodeIndex = std::uint32_t;

inline constexpr NodeIndex kRoot = 0;
inline constexpr NodeIndex kNoParent = std::numeric_limits<NodeIndex>::max();

struct LayerEntry {
  NodeId child;
  NodeId parent;

  friend bool operator==(const LayerEntry&, const LayerEntry&) = default;
};

/// The nodes of layer t+1 with their chosen parent in layer t.
struct LayerUpdate {
  std::vector<LayerEntry> entries;

  friend bool operator==(const LayerUpdate&, const LayerUpdate&) = default;
};

/// A revealed node together with every layer-t neighbour it connects to.
struct RawLayerEntry {
  NodeId child;
  std::vector<NodeId> parents;
};

struct DeactivationRecord {
  NodeId leaf;
  std::size_t d;  // edges removed with this leaf

  friend bool operator==(const DeactivationRecord&, const DeactivationRecord&) = default;
};

/// Node heights h_u; integer after a layer step, fractional during the growth
/// interpolation. Inactive nodes carry 0.
struct HeightProfile {
  std::vector<double> h;

  double operator[](NodeIndex u) const { return h[u]; }
  double& operator[](NodeIndex u) { return h[u]; }
};

/// The online layered tree. Nodes are never erased; pruning only clears the
/// active flag, so indices stay valid for the whole run.
class LayeredTree {
 public:
  LayeredTree();

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t current_layer() const noexcept { return current_layer_; }
  /// L(t): number of nodes ever removed from the active set.
  std::size_t deactivated_edges() const noexcept { return deactivated_edges_; }
  /// Largest layer cardinality seen so far.
  std::size_t max_layer_size() const noexcept { return max_layer_size_; }

  NodeId id(NodeIndex u) const { return nodes_[u].id; }
  NodeIndex index(NodeId id) const;
  std::optional<NodeIndex> find(NodeId id) const;

  NodeIndex parent(NodeIndex u) const { return nodes_[u].parent; }
  std::size_t layer(NodeIndex u) const { return nodes_[u].layer; }
  bool is_active(NodeIndex u) const { return nodes_[u].active; }
  bool is_leaf(NodeIndex u) const { return nodes_[u].active && nodes_[u].active_children.empty(); }
  std::span<const NodeIndex> children(NodeIndex u) const { return nodes_[u].children; }
  std::span<const NodeIndex> active_children(NodeIndex u) const {
    return nodes_[u].active_children;
  }

  /// Active nodes of the current layer, ascending.
  std::span<const NodeIndex> last_layer() const noexcept { return frontier_; }

  /// Active nodes, parents before children, siblings ascending. Maintained
  /// by the mutating operations, so reading it is free.
  std::span<const NodeIndex> active_preorder() const noexcept { return preorder_; }

  /// Inserts layer t+1 and prunes every layer-t dead-end together with its
  /// exclusive ancestor chain. Records come out in ascending leaf order.
  /// Throws MalformedInput on a bad update and TraversalTerminated when the
  /// update is empty.
  std::vector<DeactivationRecord> apply_layer(const LayerUpdate& update);

  /// Removes an active leaf and every ancestor whose only active descendant
  /// it was. Returns the number of removed nodes (d >= 1).
  std::size_t deactivate_leaf(NodeIndex leaf);

  /// Number of nodes that have `leaf` as their only active descendant.
  std::size_t exclusive_chain_length(NodeIndex leaf) const;

  std::size_t distance(NodeIndex a, NodeIndex b) const;
  NodeIndex lowest_common_ancestor(NodeIndex a, NodeIndex b) const;

  /// Largest id issued so far (0 for a fresh tree).
  NodeId max_id() const noexcept { return nodes_.back().id; }

 private:
  struct Node {
    NodeId id;
    NodeIndex parent;
    std::uint32_t layer;
    bool active;
    std::vector<NodeIndex> children;
    std::vector<NodeIndex> active_children;
  };

  void validate(const LayerUpdate& update) const;
  std::size_t prune(NodeIndex leaf);
  void rebuild_preorder();

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, NodeIndex> index_of_;
  std::vector<NodeIndex> frontier_;
  std::vector<NodeIndex> preorder_;
  std::size_t current_layer_ = 0;
  std::size_t deactivated_edges_ = 0;
  std::size_t max_layer_size_ = 1;
};

/// Graph-to-tree reduction: every revealed node keeps its first listed parent.
LayerUpdate reduce_to_tree(const LayeredTree& tree, std::span<const RawLayerEntry> raw_entries);

/// h_u = current_layer - layer(u) for active nodes.
HeightProfile heights(const LayeredTree& tree);

/// |L_u|: number of active last-layer descendants of every active node.
std::vector<std::size_t> subtree_leaf_counts(const LayeredTree& tree);

}  // namespace lgt
