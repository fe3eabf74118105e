#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lgt/configuration.hpp"
#include "lgt/entropic_policy.hpp"
#include "lgt/harness.hpp"
#include "lgt/layered_tree.hpp"
#include "lgt/random.hpp"

namespace lgt {

// ---------------------------------------------------------------------------
// Independent oracles

struct OracleOptions {
  std::size_t max_iters = 200000;
  /// Stop once the leaf gradients agree to within this spread.
  double tol = 1e-12;
};

/// Minimizes sum_u h_{p(u)} x_u ln(x_u/x_{p(u)}) + <gamma, x_L> by entropic
/// mirror descent on the leaf distribution, step 1/h_root. Throws
/// ConvergenceError (carrying the final gradient spread) if `max_iters` runs out.
Configuration oracle_argmin(const LayeredTree& tree, const HeightProfile& heights,
                            const GammaVector& gamma = {}, const OracleOptions& options = {});

/// Value of the objective above. Leaves of zero mass contribute nothing.
double argmin_objective(const LayeredTree& tree, const Configuration& cfg,
                        const HeightProfile& heights, const GammaVector& gamma = {});

/// Minimum-cost transport between the leaf distributions of `from` and `to`
/// under the tree metric, by successive shortest paths on the bipartite graph.
double brute_force_transport(const LayeredTree& tree, const Configuration& from,
                             const Configuration& to);

// ---------------------------------------------------------------------------
// Continuous trajectories

enum class TrajectoryKind { deactivation, growth };

/// A one-parameter family of argmin configurations x(s).
///
/// deactivation: integer heights, gamma = s e_leaf, any real s.
/// growth: `tree` has just been advanced to layer t+1; nodes of V(t) get
///   h(t) + s, the new leaves 0, s in [0, 1].
class Trajectory {
 public:
  static Trajectory deactivation(const LayeredTree& tree, NodeIndex leaf);
  static Trajectory growth(const LayeredTree& tree);

  TrajectoryKind kind() const noexcept { return kind_; }
  const LayeredTree& tree() const noexcept { return tree_; }
  NodeIndex leaf() const noexcept { return leaf_; }

  HeightProfile heights(double s) const;
  GammaVector gamma(double s) const;
  Configuration at(double s) const;

  /// d/ds of the linear term driving the dynamics, evaluated at x(s).
  GammaVector gamma_rate(const Configuration& at_s) const;

  /// Nodes whose mass movement is charged: V(t) without the root.
  std::vector<NodeIndex> charged_nodes() const;

 private:
  Trajectory(TrajectoryKind kind, LayeredTree tree, NodeIndex leaf);

  TrajectoryKind kind_;
  LayeredTree tree_;
  NodeIndex leaf_;
};

Configuration deactivation_trajectory(const LayeredTree& tree, NodeIndex leaf, double s);
Configuration growth_trajectory(const LayeredTree& tree, double s);

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-4;
/// Denominator floor of the relative error; together with kFdRelTol it acts
/// as a 1e-9 absolute floor for near-zero derivatives.
inline constexpr double kFdDerivativeFloor = 1e-5;
inline constexpr double kBoundSlack = 1e-6;

/// Right-hand side of the dynamics lemma: d/ds of every conditional, indexed
/// by NodeIndex (0 outside the support).
std::vector<double> predicted_conditional_rates(const Trajectory& trajectory, double s);

struct DynamicsCheck {
  double max_relative_error = 0.0;
  NodeIndex worst_node = kRoot;
};

/// Central finite difference of every conditional against the lemma.
DynamicsCheck check_dynamics_fd(const Trajectory& trajectory, double s, double fd_step = kFdStep);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs + kBoundSlack; }
};

/// lhs: sum of |d/ds x_u| over the charged nodes (finite difference).
/// rhs: 2 sum h_{p(u)} x_{p(u)} (d/ds cond(u))_- with the lemma's rates.
BoundCheck check_movement_bound(const Trajectory& trajectory, double s, double fd_step = kFdStep);

/// Measured instantaneous growth cost against 2 (1 + ln w)^2.
BoundCheck check_growth_rate_bound(const LayeredTree& tree, double s, std::size_t w,
                                   double fd_step = kFdStep);

struct DecayCheck {
  double rate = 0.0;   // d/ds x_leaf
  double bound = 0.0;  // -x_leaf / (2 d)
  std::size_t d = 0;
  bool holds() const { return rate <= bound + kBoundSlack; }
};

DecayCheck check_deactivation_decay(const LayeredTree& tree, NodeIndex leaf, double s,
                                    double fd_step = kFdStep);

/// |sum x ln x - sum h_p x ln(x / x_p)| under the tree's integer heights.
double check_entropy_identity(const LayeredTree& tree, const Configuration& cfg);

/// Minimum over steps of potential_total - cumulative_cost. Throws
/// ContractViolation if some step was not monitored.
double check_potential_inequality(const Trace& trace);

/// 1 <= y_u <= |L_u| (within 1e-12) for every active non-root node.
bool check_y_bounds(const LayeredTree& tree, const ExplicitWeights& weights);

// ---------------------------------------------------------------------------
// Random inputs for sweeps

struct RandomTreeOptions {
  std::size_t max_nodes = 30;
  std::size_t max_depth = 6;
  std::size_t max_width = 16;
  /// Keep generating until the final layer has at least this many nodes.
  std::size_t min_leaves = 1;
};

/// Random layered tree built through apply_layer, so dead branches are pruned
/// exactly as in a run.
LayeredTree random_tree(Rng& rng, const RandomTreeOptions& options = {});

/// Random point of K(t): independent positive conditionals, normalized.
Configuration random_configuration(const LayeredTree& tree, Rng& rng);

// ---------------------------------------------------------------------------
// Suite runner

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  std::string statistic;  // what `worst` measures
  double worst = 0.0;
  bool pass = true;
};

/// Suites: all, lemma1, dynamics, movement, growth, potential, identity.
/// Throws MalformedInput for an unknown suite name.
std::vector<CheckResult> run_verify_suite(std::string_view suite, std::uint64_t seed);

std::string format_check(const CheckResult& result);

}  // namespace lgt
