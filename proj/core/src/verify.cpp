#include "lgt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lgt/adversaries.hpp"
#include "lgt/errors.hpp"

namespace lgt {

// ---------------------------------------------------------------------------
// Oracles

double argmin_objective(const LayeredTree& tree, const Configuration& cfg,
                        const HeightProfile& heights, const GammaVector& gamma) {
  double value = 0.0;
  for (NodeIndex u : cfg.support()) {
    const double x = cfg.mass(u);
    if (x > 0.0) value += heights[tree.parent(u)] * x * std::log(cfg.cond(u));
  }
  for (NodeIndex l : cfg.leaves()) value += gamma[l] * cfg.mass(l);
  return value;
}

Configuration oracle_argmin(const LayeredTree& tree, const HeightProfile& heights,
                            const GammaVector& gamma, const OracleOptions& options) {
  const auto leaves = tree.last_layer();
  const std::size_t n = tree.node_count();
  std::vector<double> leaf_mass(n, 0.0);
  if (leaves.size() == 1) {
    leaf_mass[leaves.front()] = 1.0;
    return Configuration::from_leaf_masses(tree, leaf_mass);
  }

  const auto order = tree.active_preorder();
  // Objective in absolute masses: sum_{u != r} (h_p - h_u) x_u ln x_u + <gamma, x_L>.
  std::vector<double> weight(n, 0.0);
  for (NodeIndex u : order) {
    if (u == kRoot) continue;
    weight[u] = heights[tree.parent(u)] - heights[u];
    if (weight[u] < 0.0) throw ContractViolation("oracle needs non-increasing heights");
  }
  const double h_root = heights[kRoot];
  if (!(h_root > 0.0)) throw ContractViolation("oracle needs a positive root height");
  const double step = 1.0 / h_root;

  std::vector<double> log_leaf(n, -std::log(static_cast<double>(leaves.size())));
  std::vector<double> mass(n, 0.0);
  std::vector<double> path(n, 0.0);
  double spread = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    std::fill(mass.begin(), mass.end(), 0.0);
    for (NodeIndex l : leaves) mass[l] = std::exp(log_leaf[l]);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (*it != kRoot && !tree.is_leaf(*it)) {
        for (NodeIndex v : tree.active_children(*it)) mass[*it] += mass[v];
      }
    }
    for (NodeIndex u : order) {
      if (u == kRoot) continue;
      path[u] = path[tree.parent(u)] + weight[u] * (1.0 + std::log(mass[u]));
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (NodeIndex l : leaves) {
      const double g = path[l] + gamma[l];
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    spread = hi - lo;
    if (spread <= options.tol) {
      for (NodeIndex l : leaves) leaf_mass[l] = mass[l];
      return Configuration::from_leaf_masses(tree, leaf_mass);
    }
    // Shift by the smallest gradient before exponentiating, then renormalize.
    double top = -std::numeric_limits<double>::infinity();
    for (NodeIndex l : leaves) {
      log_leaf[l] -= step * (path[l] + gamma[l] - lo);
      top = std::max(top, log_leaf[l]);
    }
    double total = 0.0;
    for (NodeIndex l : leaves) total += std::exp(log_leaf[l] - top);
    const double shift = top + std::log(total);
    for (NodeIndex l : leaves) log_leaf[l] -= shift;
  }
  throw ConvergenceError("oracle_argmin did not converge in " + std::to_string(options.max_iters) +
                             " iterations",
                         spread);
}

double brute_force_transport(const LayeredTree& tree, const Configuration& from,
                             const Configuration& to) {
  struct Edge {
    std::size_t to;
    double cap;
    double cost;
    std::size_t rev;
  };
  std::vector<NodeIndex> sources;
  std::vector<NodeIndex> sinks;
  for (NodeIndex u : from.leaves()) {
    if (from.mass(u) > 0.0) sources.push_back(u);
  }
  for (NodeIndex u : to.leaves()) {
    if (to.mass(u) > 0.0) sinks.push_back(u);
  }
  const std::size_t m = sources.size();
  const std::size_t k = sinks.size();
  const std::size_t source = m + k;
  const std::size_t sink = source + 1;
  std::vector<std::vector<Edge>> graph(sink + 1);
  auto add = [&](std::size_t a, std::size_t b, double cap, double cost) {
    graph[a].push_back({b, cap, cost, graph[b].size()});
    graph[b].push_back({a, 0.0, -cost, graph[a].size() - 1});
  };
  const double unbounded = 2.0;
  for (std::size_t i = 0; i < m; ++i) add(source, i, from.mass(sources[i]), 0.0);
  for (std::size_t j = 0; j < k; ++j) add(m + j, sink, to.mass(sinks[j]), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      add(i, m + j, unbounded, static_cast<double>(tree.distance(sources[i], sinks[j])));
    }
  }

  constexpr double kEps = 1e-15;
  double cost = 0.0;
  const std::size_t nodes = graph.size();
  for (int round = 0; round < 100000; ++round) {
    // Bellman-Ford: residual costs can be negative.
    std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev_node(nodes, nodes);
    std::vector<std::size_t> prev_edge(nodes, 0);
    dist[source] = 0.0;
    for (std::size_t pass = 0; pass + 1 < nodes; ++pass) {
      bool changed = false;
      for (std::size_t a = 0; a < nodes; ++a) {
        if (dist[a] == std::numeric_limits<double>::infinity()) continue;
        for (std::size_t e = 0; e < graph[a].size(); ++e) {
          const Edge& edge = graph[a][e];
          if (edge.cap > kEps && dist[a] + edge.cost < dist[edge.to] - 1e-12) {
            dist[edge.to] = dist[a] + edge.cost;
            prev_node[edge.to] = a;
            prev_edge[edge.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (prev_node[sink] == nodes) return cost;
    double push = std::numeric_limits<double>::infinity();
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      push = std::min(push, graph[prev_node[v]][prev_edge[v]].cap);
    }
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      Edge& edge = graph[prev_node[v]][prev_edge[v]];
      edge.cap -= push;
      graph[v][edge.rev].cap += push;
    }
    cost += push * dist[sink];
  }
  throw ConvergenceError("brute_force_transport did not terminate", 0.0);
}

// ---------------------------------------------------------------------------
// Trajectories

Trajectory::Trajectory(TrajectoryKind kind, LayeredTree tree, NodeIndex leaf)
    : kind_(kind), tree_(std::move(tree)), leaf_(leaf) {}

Trajectory Trajectory::deactivation(const LayeredTree& tree, NodeIndex leaf) {
  if (leaf >= tree.node_count() || !tree.is_leaf(leaf) || tree.layer(leaf) != tree.current_layer() ||
      leaf == kRoot) {
    throw ContractViolation("deactivation needs an active leaf of the last layer");
  }
  return Trajectory(TrajectoryKind::deactivation, tree, leaf);
}

Trajectory Trajectory::growth(const LayeredTree& tree) {
  if (tree.current_layer() < 1) throw ContractViolation("growth needs a tree with at least one layer");
  return Trajectory(TrajectoryKind::growth, tree, kRoot);
}

HeightProfile Trajectory::heights(double s) const {
  if (kind_ == TrajectoryKind::deactivation) return lgt::heights(tree_);
  if (!(s >= 0.0 && s <= 1.0)) throw ContractViolation("growth parameter must lie in [0, 1]");
  HeightProfile h = lgt::heights(tree_);
  const std::size_t top = tree_.current_layer();
  for (NodeIndex u : tree_.active_preorder()) {
    if (tree_.layer(u) < top) h[u] = h[u] - 1.0 + s;
  }
  return h;
}

GammaVector Trajectory::gamma(double s) const {
  if (kind_ == TrajectoryKind::growth) return {};
  GammaVector g{std::vector<double>(tree_.node_count(), 0.0)};
  g.bias[leaf_] = s;
  return g;
}

Configuration Trajectory::at(double s) const {
  return explicit_argmin(tree_, heights(s), gamma(s)).config;
}

GammaVector Trajectory::gamma_rate(const Configuration& at_s) const {
  GammaVector rate{std::vector<double>(tree_.node_count(), 0.0)};
  if (kind_ == TrajectoryKind::deactivation) {
    rate.bias[leaf_] = 1.0;
  } else {
    for (NodeIndex l : tree_.last_layer()) rate.bias[l] = std::log(at_s.mass(l));
  }
  return rate;
}

std::vector<NodeIndex> Trajectory::charged_nodes() const {
  std::vector<NodeIndex> nodes;
  for (NodeIndex u : tree_.active_preorder()) {
    if (u == kRoot) continue;
    if (kind_ == TrajectoryKind::growth && tree_.layer(u) == tree_.current_layer()) continue;
    nodes.push_back(u);
  }
  return nodes;
}

Configuration deactivation_trajectory(const LayeredTree& tree, NodeIndex leaf, double s) {
  return Trajectory::deactivation(tree, leaf).at(s);
}

Configuration growth_trajectory(const LayeredTree& tree, double s) {
  return Trajectory::growth(tree).at(s);
}

// ---------------------------------------------------------------------------
// Lemma checks

std::vector<double> predicted_conditional_rates(const Trajectory& trajectory, double s) {
  const LayeredTree& tree = trajectory.tree();
  const Configuration cfg = trajectory.at(s);
  const HeightProfile h = trajectory.heights(s);
  const GammaVector rate = trajectory.gamma_rate(cfg);
  const auto order = tree.active_preorder();

  // weighted[u] = sum over leaves l below u of x_l * rate_l.
  std::vector<double> weighted(tree.node_count(), 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeIndex u = *it;
    if (tree.is_leaf(u)) weighted[u] = cfg.mass(u) * rate[u];
    if (u != kRoot) weighted[tree.parent(u)] += weighted[u];
  }
  std::vector<double> out(tree.node_count(), 0.0);
  for (NodeIndex u : order) {
    if (u == kRoot) continue;
    const NodeIndex p = tree.parent(u);
    const double scale = h[p] * cfg.mass(p);
    if (!(scale > 0.0)) continue;
    out[u] = (cfg.cond(u) * weighted[p] - weighted[u]) / scale;
  }
  return out;
}

namespace {

void check_fd_step(const Trajectory& trajectory, double s, double fd_step) {
  if (!(fd_step > 0.0 && fd_step <= 1e-2)) {
    throw ContractViolation("finite-difference step must lie in (0, 1e-2]");
  }
  if (trajectory.kind() == TrajectoryKind::growth && (s - fd_step < 0.0 || s + fd_step > 1.0)) {
    throw ContractViolation("growth finite differences need s in [step, 1 - step]");
  }
}

struct Bracket {
  Configuration minus;
  Configuration plus;
};

Bracket bracket(const Trajectory& trajectory, double s, double fd_step) {
  check_fd_step(trajectory, s, fd_step);
  return {trajectory.at(s - fd_step), trajectory.at(s + fd_step)};
}

}  // namespace

DynamicsCheck check_dynamics_fd(const Trajectory& trajectory, double s, double fd_step) {
  const auto [minus, plus] = bracket(trajectory, s, fd_step);
  const auto predicted = predicted_conditional_rates(trajectory, s);
  DynamicsCheck result;
  for (NodeIndex u : trajectory.tree().active_preorder()) {
    if (u == kRoot) continue;
    const double fd = (plus.cond(u) - minus.cond(u)) / (2.0 * fd_step);
    const double err = std::abs(fd - predicted[u]) / std::max(std::abs(predicted[u]), kFdDerivativeFloor);
    if (err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_node = u;
    }
  }
  return result;
}

namespace {

double instantaneous_cost(const Trajectory& trajectory, const Bracket& b, double fd_step) {
  double cost = 0.0;
  for (NodeIndex u : trajectory.charged_nodes()) {
    cost += std::abs(b.plus.mass(u) - b.minus.mass(u)) / (2.0 * fd_step);
  }
  return cost;
}

}  // namespace

BoundCheck check_movement_bound(const Trajectory& trajectory, double s, double fd_step) {
  const Bracket b = bracket(trajectory, s, fd_step);
  const LayeredTree& tree = trajectory.tree();
  const Configuration mid = trajectory.at(s);
  const HeightProfile h = trajectory.heights(s);
  BoundCheck result;
  result.lhs = instantaneous_cost(trajectory, b, fd_step);
  for (NodeIndex u : tree.active_preorder()) {
    if (u == kRoot) continue;
    const NodeIndex p = tree.parent(u);
    const double rate = (b.plus.cond(u) - b.minus.cond(u)) / (2.0 * fd_step);
    result.rhs += 2.0 * h[p] * mid.mass(p) * std::max(-rate, 0.0);
  }
  return result;
}

BoundCheck check_growth_rate_bound(const LayeredTree& tree, double s, std::size_t w,
                                   double fd_step) {
  if (w < tree.max_layer_size()) throw ContractViolation("w is below the tree's width");
  const Trajectory trajectory = Trajectory::growth(tree);
  const Bracket b = bracket(trajectory, s, fd_step);
  const double log_term = 1.0 + std::log(static_cast<double>(w));
  return {instantaneous_cost(trajectory, b, fd_step), 2.0 * log_term * log_term};
}

DecayCheck check_deactivation_decay(const LayeredTree& tree, NodeIndex leaf, double s,
                                    double fd_step) {
  if (!(s > 0.0)) throw ContractViolation("decay is checked for s > 0");
  const Trajectory trajectory = Trajectory::deactivation(tree, leaf);
  const Bracket b = bracket(trajectory, s, fd_step);
  DecayCheck result;
  result.d = tree.exclusive_chain_length(leaf);
  result.rate = (b.plus.mass(leaf) - b.minus.mass(leaf)) / (2.0 * fd_step);
  result.bound = -trajectory.at(s).mass(leaf) / (2.0 * static_cast<double>(result.d));
  return result;
}

double check_entropy_identity(const LayeredTree& tree, const Configuration& cfg) {
  const HeightProfile h = heights(tree);
  return std::abs(entropy_value(tree, cfg, h) - conditional_entropy(tree, cfg, h));
}

double check_potential_inequality(const Trace& trace) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& step : trace.steps) {
    const auto slack = step.slack();
    if (!slack) throw ContractViolation("trace step " + std::to_string(step.t) + " was not monitored");
    worst = std::min(worst, *slack);
  }
  return worst;
}

bool check_y_bounds(const LayeredTree& tree, const ExplicitWeights& weights) {
  const auto counts = subtree_leaf_counts(tree);
  for (NodeIndex u : tree.active_preorder()) {
    if (u == kRoot) continue;
    const double y = weights.y[u];
    if (y < 1.0 - 1e-12 || y > static_cast<double>(counts[u]) + 1e-12) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random inputs

namespace {

/// Draws a non-empty next layer for `tree` with at most `max_entries` nodes.
LayerUpdate random_layer(const LayeredTree& tree, Rng& rng, std::size_t max_entries) {
  LayerUpdate update;
  std::uint64_t next = raw(tree.max_id()) + 1;
  for (NodeIndex u : tree.last_layer()) {
    const double draw = uniform01(rng);
    const int children = draw < 0.25 ? 0 : draw < 0.6 ? 1 : draw < 0.85 ? 2 : 3;
    for (int c = 0; c < children && update.entries.size() < max_entries; ++c) {
      update.entries.push_back({NodeId{next++}, tree.id(u)});
    }
  }
  if (update.entries.empty()) {
    const auto frontier = tree.last_layer();
    const NodeIndex u = frontier[uniform_index(rng, frontier.size())];
    update.entries.push_back({NodeId{next}, tree.id(u)});
  }
  return update;
}

}  // namespace

LayeredTree random_tree(Rng& rng, const RandomTreeOptions& options) {
  if (options.max_nodes < 2 || options.max_depth < 1 || options.max_width < 1) {
    throw ContractViolation("random tree options are too small");
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const std::size_t depth = 1 + uniform_index(rng, options.max_depth);
    LayeredTree tree;
    for (std::size_t layer = 1; layer <= depth; ++layer) {
      const std::size_t budget = options.max_nodes - tree.node_count();
      if (budget == 0) break;
      tree.apply_layer(random_layer(tree, rng, std::min(budget, options.max_width)));
    }
    if (tree.last_layer().size() >= options.min_leaves) return tree;
  }
  throw GenerationFailed("no random tree with " + std::to_string(options.min_leaves) + " leaves");
}

Configuration random_configuration(const LayeredTree& tree, Rng& rng) {
  std::vector<double> cond(tree.node_count(), 0.0);
  for (NodeIndex u : tree.active_preorder()) {
    const auto kids = tree.active_children(u);
    double total = 0.0;
    for (NodeIndex v : kids) {
      cond[v] = std::exp(4.0 * (uniform01(rng) - 0.5));
      total += cond[v];
    }
    for (NodeIndex v : kids) cond[v] /= total;
  }
  return Configuration::from_conditionals(tree, std::move(cond));
}

// ---------------------------------------------------------------------------
// Suites

namespace {

using Results = std::vector<CheckResult>;

void lemma1_suite(std::uint64_t seed, Results& out) {
  Rng rng = substream(seed, "verify.lemma1");
  CheckResult objective{"lemma1_objective_gap", 0, "|obj explicit - obj oracle|", 0.0, true};
  CheckResult conditional{"lemma1_conditional_gap", 0, "max |cond explicit - cond oracle|", 0.0, true};
  CheckResult perturb{"lemma1_perturbation", 0, "min obj(x + eps d) - obj(x)",
                      std::numeric_limits<double>::infinity(), true};
  CheckResult ybounds{"lemma1_y_bounds", 0, "violations", 0.0, true};
  for (int i = 0; i < 100; ++i) {
    const LayeredTree tree = random_tree(rng);
    const HeightProfile h = heights(tree);
    const bool biased = i % 2 == 1;
    GammaVector gamma;
    if (biased && tree.current_layer() >= 1) {
      gamma.bias.assign(tree.node_count(), 0.0);
      for (NodeIndex l : tree.last_layer()) gamma.bias[l] = 2.0 * uniform01(rng) - 1.0;
    }
    const ArgminResult exact = explicit_argmin(tree, h, gamma);
    if (tree.current_layer() == 0) continue;
    const Configuration oracle = oracle_argmin(tree, h, gamma);
    const double f_exact = argmin_objective(tree, exact.config, h, gamma);
    const double f_oracle = argmin_objective(tree, oracle, h, gamma);
    objective.worst = std::max(objective.worst, std::abs(f_exact - f_oracle));
    for (NodeIndex u : exact.config.support()) {
      conditional.worst = std::max(conditional.worst, std::abs(exact.config.cond(u) - oracle.cond(u)));
    }
    ++objective.instances;
    ++conditional.instances;

    if (!biased) {
      ++ybounds.instances;
      if (!check_y_bounds(tree, exact.weights)) ybounds.worst += 1.0;
    }

    // Moving eps mass between two leaves is a feasible flow direction.
    const auto leaves = tree.last_layer();
    if (leaves.size() >= 2) {
      ++perturb.instances;
      constexpr double kEps = 1e-4;
      for (int d = 0; d < 50; ++d) {
        const NodeIndex a = leaves[uniform_index(rng, leaves.size())];
        NodeIndex b = leaves[uniform_index(rng, leaves.size() - 1)];
        if (b == a) b = leaves.back();
        std::vector<double> mass(tree.node_count(), 0.0);
        for (NodeIndex l : leaves) mass[l] = exact.config.mass(l);
        const double moved = std::min(kEps, mass[a]);
        mass[a] -= moved;
        mass[b] += moved;
        const auto shifted = Configuration::from_leaf_masses(tree, mass);
        perturb.worst = std::min(perturb.worst, argmin_objective(tree, shifted, h, gamma) - f_exact);
      }
    }
  }
  objective.pass = objective.worst <= 1e-8;
  conditional.pass = conditional.worst <= 1e-6;
  perturb.pass = perturb.worst >= -1e-12;
  ybounds.pass = ybounds.worst == 0.0;
  out.insert(out.end(), {objective, conditional, perturb, ybounds});
}

constexpr double kDeactivationSamples[] = {0.0, 0.25, 0.5, 1.0, 2.0};
constexpr double kDecaySamples[] = {0.01, 0.1, 0.5, 1.0, 2.0};
constexpr double kGrowthSamples[] = {0.1, 0.3, 0.5, 0.7, 0.9};

RandomTreeOptions sweep_options() {
  RandomTreeOptions options;
  options.max_nodes = 60;
  options.max_depth = 12;
  options.max_width = 16;
  options.min_leaves = 2;
  return options;
}

void dynamics_suite(std::uint64_t seed, Results& out) {
  Rng rng = substream(seed, "verify.dynamics");
  CheckResult deact{"dynamics_deactivation", 0, "max relative FD error", 0.0, true};
  CheckResult grow{"dynamics_growth", 0, "max relative FD error", 0.0, true};
  CheckResult decay{"deactivation_decay", 0, "max rate - bound", -std::numeric_limits<double>::infinity(), true};
  for (int i = 0; i < 50; ++i) {
    const LayeredTree tree = random_tree(rng, sweep_options());
    const auto leaves = tree.last_layer();
    const NodeIndex leaf = leaves[uniform_index(rng, leaves.size())];
    const auto deactivation = Trajectory::deactivation(tree, leaf);
    const auto growth = Trajectory::growth(tree);
    for (double s : kDeactivationSamples) {
      deact.worst = std::max(deact.worst, check_dynamics_fd(deactivation, s).max_relative_error);
    }
    for (double s : kGrowthSamples) {
      grow.worst = std::max(grow.worst, check_dynamics_fd(growth, s).max_relative_error);
    }
    for (double s : kDecaySamples) {
      const DecayCheck c = check_deactivation_decay(tree, leaf, s);
      decay.worst = std::max(decay.worst, c.rate - c.bound);
    }
    ++deact.instances;
    ++grow.instances;
    ++decay.instances;
  }
  deact.pass = deact.worst <= kFdRelTol;
  grow.pass = grow.worst <= kFdRelTol;
  decay.pass = decay.worst <= kBoundSlack;
  out.insert(out.end(), {deact, grow, decay});
}

void movement_suite(std::uint64_t seed, Results& out) {
  Rng rng = substream(seed, "verify.movement");
  CheckResult deact{"movement_deactivation", 0, "max lhs - rhs", -std::numeric_limits<double>::infinity(), true};
  CheckResult grow{"movement_growth", 0, "max lhs - rhs", -std::numeric_limits<double>::infinity(), true};
  for (int i = 0; i < 50; ++i) {
    const LayeredTree tree = random_tree(rng, sweep_options());
    const auto leaves = tree.last_layer();
    const NodeIndex leaf = leaves[uniform_index(rng, leaves.size())];
    const auto deactivation = Trajectory::deactivation(tree, leaf);
    const auto growth = Trajectory::growth(tree);
    for (double s : kDeactivationSamples) {
      const BoundCheck c = check_movement_bound(deactivation, s);
      deact.worst = std::max(deact.worst, c.lhs - c.rhs);
    }
    for (double s : kGrowthSamples) {
      const BoundCheck c = check_movement_bound(growth, s);
      grow.worst = std::max(grow.worst, c.lhs - c.rhs);
    }
    ++deact.instances;
    ++grow.instances;
  }
  deact.pass = deact.worst <= kBoundSlack;
  grow.pass = grow.worst <= kBoundSlack;
  out.insert(out.end(), {deact, grow});
}

void growth_suite(std::uint64_t seed, Results& out) {
  Rng rng = substream(seed, "verify.growth");
  CheckResult rate{"growth_rate_bound", 0, "max measured - 2(1+ln w)^2", -std::numeric_limits<double>::infinity(), true};
  CheckResult endpoint{"growth_endpoint", 0, "max |cond x(1) - cond argmin|", 0.0, true};
  for (int i = 0; i < 50; ++i) {
    const LayeredTree tree = random_tree(rng, sweep_options());
    for (double s : kGrowthSamples) {
      const BoundCheck c = check_growth_rate_bound(tree, s, tree.max_layer_size());
      rate.worst = std::max(rate.worst, c.lhs - c.rhs);
    }
    const Configuration end = growth_trajectory(tree, 1.0);
    const Configuration next = explicit_argmin(tree, heights(tree)).config;
    for (NodeIndex u : next.support()) {
      endpoint.worst = std::max(endpoint.worst, std::abs(end.cond(u) - next.cond(u)));
    }
    ++rate.instances;
    ++endpoint.instances;
  }
  rate.pass = rate.worst <= kBoundSlack;
  endpoint.pass = endpoint.worst <= 1e-12;
  out.insert(out.end(), {rate, endpoint});
}

void potential_suite(std::uint64_t seed, Results& out) {
  CheckResult slack{"potential_inequality", 0, "min (P(t) - cost(t)) / t", std::numeric_limits<double>::infinity(), true};
  CheckResult ratio{"ratio_bound", 0, "max ratio - (4 + 6(1+ln w)^2)", -std::numeric_limits<double>::infinity(), true};
  RunConfig config;
  config.policy = PolicyKind::entropic;
  config.potential_monitor = true;
  auto account = [&](const Trace& trace) {
    const double log_term = 1.0 + std::log(static_cast<double>(trace.width));
    const double bound = 4.0 + 6.0 * log_term * log_term;
    for (const auto& step : trace.steps) {
      const auto t = static_cast<double>(step.t);
      slack.worst = std::min(slack.worst, *step.slack() / t);
      ratio.worst = std::max(ratio.worst, step.ratio - bound);
    }
    ++slack.instances;
    ++ratio.instances;
  };
  constexpr std::size_t kDepth = 200;
  for (std::size_t w : {2, 4, 8}) {
    account(run_fractional(gen_star(w, kDepth), config));
    account(run_fractional(gen_comb(w, kDepth), config));
    for (std::uint64_t r = 0; r < 4; ++r) {
      account(run_fractional(gen_random(w, kDepth, seed + r, 0.3, 0.2), config));
    }
    AdaptiveAdversary adversary(AdaptiveAdversary::Kind::max_mass_killer, w, kDepth);
    account(run_fractional(adversary, config));
  }
  account(run_fractional(gen_alternating(kDepth), config));
  slack.pass = slack.worst >= -kPotentialSlackTol;
  ratio.pass = ratio.worst <= 1e-6;
  out.insert(out.end(), {slack, ratio});
}

void identity_suite(std::uint64_t seed, Results& out) {
  Rng rng = substream(seed, "verify.identity");
  CheckResult identity{"entropy_identity", 0, "max |sum x ln x - conditional form|", 0.0, true};
  for (int i = 0; i < 1000; ++i) {
    const LayeredTree tree = random_tree(rng, sweep_options());
    identity.worst = std::max(identity.worst, check_entropy_identity(tree, random_configuration(tree, rng)));
    ++identity.instances;
  }
  identity.pass = identity.worst <= 1e-10;

  CheckResult transport{"ot_coupling_oracle", 0, "max |coupling - brute force|", 0.0, true};
  RandomTreeOptions small;
  small.max_nodes = 24;
  small.max_depth = 6;
  small.max_width = 8;
  for (int i = 0; i < 200; ++i) {
    LayeredTree tree = random_tree(rng, small);
    const Configuration before = random_configuration(tree, rng);
    LayerUpdate update;
    std::uint64_t next = raw(tree.max_id()) + 1;
    for (NodeIndex u : tree.last_layer()) {
      const std::uint64_t kids = uniform_index(rng, 3);
      for (std::uint64_t c = 0; c < kids && update.entries.size() < 8; ++c) {
        update.entries.push_back({NodeId{next++}, tree.id(u)});
      }
    }
    if (update.entries.empty()) update.entries.push_back({NodeId{next}, tree.id(tree.last_layer().front())});
    tree.apply_layer(update);
    const Configuration after = random_configuration(tree, rng);
    const TransportPlan plan = ot_coupling(tree, before, after);
    const double reference = brute_force_transport(tree, before, after);
    transport.worst = std::max(transport.worst, std::abs(plan.cost - reference));
    transport.worst = std::max(transport.worst, std::abs(ot_cost(before, after) - reference));
    ++transport.instances;
  }
  transport.pass = transport.worst <= 1e-8;
  out.insert(out.end(), {identity, transport});
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::string_view suite, std::uint64_t seed) {
  Results out;
  const bool all = suite == "all";
  bool known = all;
  auto want = [&](std::string_view name) {
    const bool hit = all || suite == name;
    known = known || hit;
    return hit;
  };
  if (want("lemma1")) lemma1_suite(seed, out);
  if (want("dynamics")) dynamics_suite(seed, out);
  if (want("movement")) movement_suite(seed, out);
  if (want("growth")) growth_suite(seed, out);
  if (want("potential")) potential_suite(seed, out);
  if (want("identity")) identity_suite(seed, out);
  if (!known) throw MalformedInput("unknown verify suite '" + std::string(suite) + "'");
  return out;
}

std::string format_check(const CheckResult& result) {
  char worst[32];
  std::snprintf(worst, sizeof worst, "%.3e", result.worst);
  std::string line = result.name;
  line.resize(std::max<std::size_t>(line.size() + 1, 26), ' ');
  line += "instances=" + std::to_string(result.instances);
  line += "  worst=" + std::string(worst) + " (" + result.statistic + ")  ";
  line += result.pass ? "PASS" : "FAIL";
  return line;
}

}  // namespace lgt
