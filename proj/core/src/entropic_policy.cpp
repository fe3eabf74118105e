#include "lgt/entropic_policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lgt/errors.hpp"

namespace lgt {

namespace {

std::string node_name(const LayeredTree& tree, NodeIndex u) {
  return std::to_string(raw(tree.id(u)));
}

}  // namespace

ArgminResult explicit_argmin(const LayeredTree& tree, const HeightProfile& heights,
                             const GammaVector& gamma) {
  const std::size_t n = tree.node_count();
  if (heights.h.size() < n) throw ContractViolation("height profile does not cover the tree");

  const auto order = tree.active_preorder();
  std::vector<double> y(n, 0.0);
  std::vector<double> child_sum(n, 0.0);

  for (NodeIndex u = 0; u < std::min(n, gamma.bias.size()); ++u) {
    if (gamma.bias[u] != 0.0 && !tree.is_leaf(u)) {
      throw ContractViolation("bias on node " + node_name(tree, u) + " which is not an active leaf");
    }
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeIndex u = *it;
    const double hu = heights[u];
    if (tree.is_leaf(u)) {
      if (hu != 0.0) throw ContractViolation("leaf " + node_name(tree, u) + " has non-zero height");
      if (u == kRoot) continue;
      const double g = gamma[u];
      const double hp = heights[tree.parent(u)];
      if (g == 0.0) {
        y[u] = 1.0;
      } else if (!(hp > 0.0)) {
        throw ContractViolation("bias on leaf " + node_name(tree, u) + " whose parent has height 0");
      } else {
        y[u] = std::max(std::exp(-g / hp), kWeightFloor);
      }
      continue;
    }

    double sum = 0.0;
    for (NodeIndex v : tree.active_children(u)) {
      if (!(hu > heights[v]) && !(hu == 0.0 && tree.is_leaf(v) && gamma[v] == 0.0)) {
        throw ContractViolation("heights must strictly decrease below node " + node_name(tree, u));
      }
      sum += y[v];
    }
    if (hu < 0.0) throw ContractViolation("negative height on node " + node_name(tree, u));
    child_sum[u] = sum;
    if (u == kRoot) {
      y[u] = sum;
      continue;
    }
    const double hp = heights[tree.parent(u)];
    if (hu == 0.0 || sum == 1.0) {
      y[u] = 1.0;  // exact, and the common case along unary chains
    } else {
      y[u] = std::max(std::pow(sum, hu / hp), kWeightFloor);
    }
  }

  std::vector<double> cond(n, 0.0);
  for (NodeIndex u : order) {
    if (u == kRoot) continue;
    cond[u] = y[u] / child_sum[tree.parent(u)];
  }
  return {Configuration::from_conditionals(tree, std::move(cond)), ExplicitWeights{std::move(y)}};
}

PotentialBreakdown potential(const LayeredTree& tree, const Configuration& cfg,
                             std::size_t declared_width) {
  if (declared_width < tree.max_layer_size() || declared_width == 0) {
    throw ContractViolation("declared width " + std::to_string(declared_width) +
                            " is below the observed width " + std::to_string(tree.max_layer_size()));
  }
  const double w = static_cast<double>(declared_width);
  const double log_w = std::log(w);
  const double phi = entropy_value(tree, cfg, heights(tree));

  PotentialBreakdown p;
  p.deactivation_term = 4.0 * static_cast<double>(tree.deactivated_edges()) / w;
  p.entropy_term = 4.0 * log_w * phi;
  p.time_term = 6.0 * (1.0 + log_w) * (1.0 + log_w) * static_cast<double>(tree.current_layer());
  p.total = p.deactivation_term + p.entropy_term + p.time_term;
  return p;
}

Configuration EntropicPolicy::configure(const LayeredTree& tree) {
  return explicit_argmin(tree, heights(tree)).config;
}

}  // namespace lgt
