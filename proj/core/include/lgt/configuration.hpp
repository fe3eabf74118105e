#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lgt/layered_tree.hpp"
#include "lgt/random.hpp"

namespace lgt {

/// Constraint-check tolerance for configurations and transport plans.
inline constexpr double kConstraintTol = 1e-9;
/// Absolute masses below this are flushed to zero.
inline constexpr double kMassFloor = 1e-300;

/// A point of the active polytope K(t): conditional probabilities per node and
/// the derived absolute subtree masses. Values are stored densely by
/// NodeIndex; nodes outside the support read as 0 (the root reads mass 1).
class Configuration {
 public:
  /// All mass on the root; the configuration before any layer is revealed.
  explicit Configuration(const LayeredTree& tree);

  /// Builds masses top-down from conditionals over the active tree.
  /// `cond` is indexed by NodeIndex; the root entry is ignored.
  static Configuration from_conditionals(const LayeredTree& tree, std::vector<double> cond);

  /// Builds internal masses bottom-up from a distribution on the last layer.
  static Configuration from_leaf_masses(const LayeredTree& tree, std::span<const double> leaf_mass);

  /// Unit mass on one last-layer node, supported only on its root path.
  static Configuration point_mass(const LayeredTree& tree, NodeIndex leaf);

  /// Non-root support nodes, parents before children.
  std::span<const NodeIndex> support() const noexcept { return support_; }
  /// Support nodes on the configuration's layer, ascending.
  std::span<const NodeIndex> leaves() const noexcept { return leaves_; }
  std::size_t layer() const noexcept { return layer_; }

  bool contains(NodeIndex u) const { return u < in_support_.size() && in_support_[u]; }
  double cond(NodeIndex u) const { return contains(u) ? cond_[u] : 0.0; }
  double mass(NodeIndex u) const {
    if (u == kRoot) return 1.0;
    return contains(u) ? mass_[u] : 0.0;
  }

  /// Throws ContractViolation unless sibling conditionals sum to one, masses
  /// are products of conditionals and flow is conserved at every node.
  void check(const LayeredTree& tree, double tol = kConstraintTol) const;

 private:
  Configuration() = default;
  void reset(const LayeredTree& tree);

  std::vector<NodeIndex> support_;
  std::vector<NodeIndex> leaves_;
  std::vector<double> cond_;
  std::vector<double> mass_;
  std::vector<char> in_support_;
  std::size_t layer_ = 0;
};

/// Phi = sum of x_u ln x_u over support nodes with positive mass. Throws
/// ContractViolation if heights increase along a root-leaf path.
double entropy_value(const LayeredTree& tree, const Configuration& cfg, const HeightProfile& heights);

/// The conditional form sum_u h_{p(u)} x_u ln(x_u / x_{p(u)}).
double conditional_entropy(const LayeredTree& tree, const Configuration& cfg,
                           const HeightProfile& heights);

/// Earth-mover distance on the tree: sum over non-root nodes of |X'_u - X_u|,
/// each configuration extended by zero outside its support.
double ot_cost(const Configuration& a, const Configuration& b);

struct TransportMove {
  NodeIndex from;
  NodeIndex to;
  double mass;
  std::size_t distance;
};

struct TransportPlan {
  std::vector<TransportMove> moves;
  double cost = 0.0;
};

/// Optimal coupling between the leaf distributions of `from` and `to` built
/// in one bottom-up pass: surplus and deficit are cancelled inside each
/// subtree (children ascending) and only the residual crosses the parent edge.
TransportPlan ot_coupling(const LayeredTree& tree, const Configuration& from, const Configuration& to);

/// Samples the agent's next node given its current one.
NodeIndex sample_transition(const TransportPlan& plan, NodeIndex current, Rng& rng);

}  // namespace lgt
