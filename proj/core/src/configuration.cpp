#include "lgt/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lgt/errors.hpp"

namespace lgt {

namespace {

double flush(double m) { return m < kMassFloor ? 0.0 : m; }

}  // namespace

Configuration::Configuration(const LayeredTree& tree) {
  reset(tree);
  if (tree.current_layer() == 0) leaves_.push_back(kRoot);
}

void Configuration::reset(const LayeredTree& tree) {
  const std::size_t n = tree.node_count();
  support_.clear();
  leaves_.clear();
  cond_.assign(n, 0.0);
  mass_.assign(n, 0.0);
  in_support_.assign(n, 0);
  in_support_[kRoot] = 1;
  cond_[kRoot] = 1.0;
  mass_[kRoot] = 1.0;
  layer_ = tree.current_layer();
}

Configuration Configuration::from_conditionals(const LayeredTree& tree, std::vector<double> cond) {
  if (cond.size() != tree.node_count()) {
    throw ContractViolation("conditional vector size does not match the tree");
  }
  Configuration cfg;
  cfg.reset(tree);
  cfg.cond_ = std::move(cond);
  cfg.cond_[kRoot] = 1.0;
  for (NodeIndex u : tree.active_preorder()) {
    if (u == kRoot) continue;
    cfg.mass_[u] = flush(cfg.mass_[tree.parent(u)] * cfg.cond_[u]);
    cfg.in_support_[u] = 1;
    cfg.support_.push_back(u);
  }
  for (NodeIndex u : tree.last_layer()) cfg.leaves_.push_back(u);
  return cfg;
}

Configuration Configuration::from_leaf_masses(const LayeredTree& tree,
                                              std::span<const double> leaf_mass) {
  if (leaf_mass.size() != tree.node_count()) {
    throw ContractViolation("leaf mass vector size does not match the tree");
  }
  Configuration cfg;
  cfg.reset(tree);
  const auto order = tree.active_preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeIndex u = *it;
    if (u == kRoot) continue;
    if (tree.is_leaf(u)) {
      cfg.mass_[u] = flush(leaf_mass[u]);
    }
    cfg.mass_[tree.parent(u)] += cfg.mass_[u];
  }
  cfg.mass_[kRoot] = 1.0;
  for (NodeIndex u : order) {
    if (u == kRoot) continue;
    const double parent_mass = cfg.mass_[tree.parent(u)];
    cfg.cond_[u] = parent_mass > 0.0 ? cfg.mass_[u] / parent_mass : 0.0;
    cfg.in_support_[u] = 1;
    cfg.support_.push_back(u);
  }
  for (NodeIndex u : tree.last_layer()) cfg.leaves_.push_back(u);
  return cfg;
}

Configuration Configuration::point_mass(const LayeredTree& tree, NodeIndex leaf) {
  if (!tree.is_active(leaf) || tree.layer(leaf) != tree.current_layer()) {
    throw ContractViolation("point mass must sit on a last-layer node");
  }
  Configuration cfg;
  cfg.reset(tree);
  for (NodeIndex u = leaf; u != kRoot; u = tree.parent(u)) {
    cfg.cond_[u] = 1.0;
    cfg.mass_[u] = 1.0;
    cfg.in_support_[u] = 1;
    cfg.support_.push_back(u);
  }
  std::reverse(cfg.support_.begin(), cfg.support_.end());
  cfg.leaves_.push_back(leaf);
  return cfg;
}

void Configuration::check(const LayeredTree& tree, double tol) const {
  std::vector<double> child_cond(mass_.size(), 0.0);
  std::vector<double> child_mass(mass_.size(), 0.0);
  std::vector<char> has_children(mass_.size(), 0);
  for (NodeIndex u : support_) {
    const NodeIndex p = tree.parent(u);
    if (std::abs(mass(u) - mass(p) * cond_[u]) > tol) {
      throw ContractViolation("mass of node " + std::to_string(raw(tree.id(u))) +
                              " is not the product of its conditionals");
    }
    child_cond[p] += cond_[u];
    child_mass[p] += mass(u);
    has_children[p] = 1;
  }
  for (NodeIndex p = 0; p < has_children.size(); ++p) {
    if (!has_children[p]) continue;
    if (mass(p) > 0.0 && std::abs(child_cond[p] - 1.0) > tol) {
      throw ContractViolation("conditionals below node " + std::to_string(raw(tree.id(p))) +
                              " do not sum to one");
    }
    if (std::abs(child_mass[p] - mass(p)) > tol) {
      throw ContractViolation("flow is not conserved at node " + std::to_string(raw(tree.id(p))));
    }
  }
}

namespace {

void check_heights(const LayeredTree& tree, const Configuration& cfg, const HeightProfile& heights) {
  if (heights.h.size() < tree.node_count()) {
    throw ContractViolation("height profile does not cover the tree");
  }
  for (NodeIndex u : cfg.support()) {
    const NodeIndex p = tree.parent(u);
    if (!(heights[p] > heights[u]) || heights[u] < 0.0) {
      throw ContractViolation("heights must strictly decrease from node " +
                              std::to_string(raw(tree.id(p))) + " to its child " +
                              std::to_string(raw(tree.id(u))));
    }
  }
}

}  // namespace

double entropy_value(const LayeredTree& tree, const Configuration& cfg, const HeightProfile& heights) {
  check_heights(tree, cfg, heights);
  // Along a unary chain the mass is unchanged, so its logarithm is reused.
  std::vector<double> log_mass(tree.node_count(), 0.0);
  double phi = 0.0;
  for (NodeIndex u : cfg.support()) {
    const double x = cfg.mass(u);
    if (!(x > 0.0)) continue;
    const NodeIndex p = tree.parent(u);
    log_mass[u] = x == cfg.mass(p) ? log_mass[p] : std::log(x);
    phi += x * log_mass[u];
  }
  return phi;
}

double conditional_entropy(const LayeredTree& tree, const Configuration& cfg,
                           const HeightProfile& heights) {
  check_heights(tree, cfg, heights);
  double phi = 0.0;
  for (NodeIndex u : cfg.support()) {
    const double x = cfg.mass(u);
    if (x > 0.0) phi += heights[tree.parent(u)] * x * std::log(cfg.cond(u));
  }
  return phi;
}

double ot_cost(const Configuration& a, const Configuration& b) {
  double cost = 0.0;
  for (NodeIndex u : a.support()) cost += std::abs(b.mass(u) - a.mass(u));
  for (NodeIndex u : b.support()) {
    if (!a.contains(u)) cost += b.mass(u);
  }
  return cost;
}

TransportPlan ot_coupling(const LayeredTree& tree, const Configuration& from, const Configuration& to) {
  struct Entry {
    NodeIndex node;
    double mass;
  };
  struct Pending {
    std::vector<Entry> surplus;
    std::vector<Entry> deficit;
    bool touched = false;
  };

  double total_from = 0.0;
  double total_to = 0.0;
  for (NodeIndex u : from.leaves()) total_from += from.mass(u);
  for (NodeIndex u : to.leaves()) total_to += to.mass(u);
  if (std::abs(total_from - total_to) > kConstraintTol) {
    throw ContractViolation("transport marginals differ: " + std::to_string(total_from) + " vs " +
                            std::to_string(total_to));
  }

  std::vector<Pending> pending(tree.node_count());
  std::vector<NodeIndex> nodes;
  auto touch = [&](NodeIndex u) {
    if (!pending[u].touched) {
      pending[u].touched = true;
      nodes.push_back(u);
    }
  };
  for (NodeIndex u : from.leaves()) {
    if (from.mass(u) <= 0.0) continue;
    touch(u);
    pending[u].surplus.push_back({u, from.mass(u)});
  }
  for (NodeIndex u : to.leaves()) {
    if (to.mass(u) <= 0.0) continue;
    touch(u);
    pending[u].deficit.push_back({u, to.mass(u)});
  }
  // Ancestors of every endpoint take part in the sweep.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeIndex p = tree.parent(nodes[i]);
    if (p != kNoParent) touch(p);
  }
  std::sort(nodes.begin(), nodes.end(), [&](NodeIndex a, NodeIndex b) {
    if (tree.layer(a) != tree.layer(b)) return tree.layer(a) > tree.layer(b);
    return a < b;
  });

  TransportPlan plan;
  for (NodeIndex u : nodes) {
    Pending& here = pending[u];
    for (NodeIndex c : tree.children(u)) {
      Pending& child = pending[c];
      if (!child.touched) continue;
      here.surplus.insert(here.surplus.end(), child.surplus.begin(), child.surplus.end());
      here.deficit.insert(here.deficit.end(), child.deficit.begin(), child.deficit.end());
      child.surplus = {};
      child.deficit = {};
    }

    std::size_t i = 0;
    std::size_t j = 0;
    const std::size_t base = tree.layer(u);
    while (i < here.surplus.size() && j < here.deficit.size()) {
      Entry& s = here.surplus[i];
      Entry& d = here.deficit[j];
      const double m = std::min(s.mass, d.mass);
      const std::size_t dist = tree.layer(s.node) + tree.layer(d.node) - 2 * base;
      if (m > 0.0 && dist > 0) {
        plan.moves.push_back({s.node, d.node, m, dist});
        plan.cost += m * static_cast<double>(dist);
      }
      s.mass -= m;
      d.mass -= m;
      if (s.mass <= 0.0) ++i;
      if (d.mass <= 0.0) ++j;
    }
    here.surplus.erase(here.surplus.begin(), here.surplus.begin() + static_cast<std::ptrdiff_t>(i));
    here.deficit.erase(here.deficit.begin(), here.deficit.begin() + static_cast<std::ptrdiff_t>(j));
  }
  // Whatever is left at the root is rounding noise below kConstraintTol.
  return plan;
}

NodeIndex sample_transition(const TransportPlan& plan, NodeIndex current, Rng& rng) {
  double total = 0.0;
  for (const auto& move : plan.moves) {
    if (move.from == current) total += move.mass;
  }
  if (!(total > 0.0)) throw ContractViolation("node is not a source of the transport plan");
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  NodeIndex last = current;
  for (const auto& move : plan.moves) {
    if (move.from != current) continue;
    acc += move.mass;
    last = move.to;
    if (target < acc) return move.to;
  }
  return last;
}

}  // namespace lgt
