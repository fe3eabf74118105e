#include "lgt/harness.hpp"

#include <cmath>
#include <unordered_map>

#include "lgt/errors.hpp"
#include "lgt/random.hpp"

namespace lgt {

std::string_view to_string(RunMode mode) {
  return mode == RunMode::fractional ? "fractional" : "randomized";
}

std::string_view to_string(WidthSource source) {
  return source == WidthSource::instance ? "instance" : "running_max";
}

std::optional<RunMode> parse_run_mode(std::string_view name) {
  if (name == "fractional") return RunMode::fractional;
  if (name == "randomized") return RunMode::randomized;
  return std::nullopt;
}

std::optional<WidthSource> parse_width_source(std::string_view name) {
  if (name == "instance") return WidthSource::instance;
  if (name == "running_max") return WidthSource::running_max;
  return std::nullopt;
}

bool potential_violated(const Trace& trace) {
  for (const auto& step : trace.steps) {
    const auto slack = step.slack();
    if (slack && *slack < -kPotentialSlackTol * static_cast<double>(step.t)) return true;
  }
  return false;
}

std::string make_run_id(PolicyKind policy, std::string_view instance, RunMode mode,
                        std::uint64_t seed) {
  std::string id{to_string(policy)};
  id += '/';
  id += instance;
  id += '/';
  id += to_string(mode);
  if (mode == RunMode::randomized) id += "/seed=" + std::to_string(seed);
  return id;
}

namespace {

/// Shared per-layer bookkeeping of the fractional runs.
class Recorder {
 public:
  Recorder(Trace& trace, bool monitor) : trace_(trace), monitor_(monitor) {}

  void record(const LayeredTree& tree, std::vector<DeactivationRecord> records, double cost,
              const Configuration& cfg, std::size_t width) {
    StepRecord step;
    step.t = tree.current_layer();
    step.layer_size = tree.last_layer().size();
    step.deactivations = std::move(records);
    step.deactivated_edges = tree.deactivated_edges();
    step.cost_delta = cost;
    cumulative_ += cost;
    step.cumulative_cost = cumulative_;
    step.opt = step.t;
    step.ratio = cumulative_ / static_cast<double>(step.t);
    if (monitor_) step.potential = potential(tree, cfg, width);
    trace_.steps.push_back(std::move(step));
  }

 private:
  Trace& trace_;
  bool monitor_;
  double cumulative_ = 0.0;
};

[[noreturn]] void rethrow_at_step(std::size_t t, const ContractViolation& e) {
  throw ContractViolation("step " + std::to_string(t) + ": " + e.what());
}

}  // namespace

Trace run_fractional(const Instance& instance, const RunConfig& config) {
  Trace trace;
  trace.run_id = make_run_id(config.policy, instance.name, RunMode::fractional, config.seed);
  trace.policy = config.policy;
  trace.instance = instance.name;
  trace.width = instance.width;
  trace.width_source = WidthSource::instance;

  auto policy = make_policy(config.policy);
  Recorder recorder(trace, config.monitoring());
  LayeredTree tree;
  for (const auto& update : instance.layers) {
    try {
      auto records = tree.apply_layer(update);
      const double cost = policy->step(tree);
      recorder.record(tree, std::move(records), cost, policy->current(), instance.width);
    } catch (const ContractViolation& e) {
      rethrow_at_step(tree.current_layer(), e);
    }
  }
  return trace;
}

Trace run_fractional(AdaptiveAdversary& adversary, const RunConfig& config) {
  Trace trace;
  trace.run_id = make_run_id(config.policy, adversary.name(), RunMode::fractional, config.seed);
  trace.policy = config.policy;
  trace.instance = adversary.name();
  trace.width_source = WidthSource::running_max;

  auto policy = make_policy(config.policy);
  Recorder recorder(trace, config.monitoring());
  LayeredTree tree;
  while (!adversary.finished(tree)) {
    try {
      const LayerUpdate update = adversary.next_layer(tree, policy->current());
      auto records = tree.apply_layer(update);
      const double cost = policy->step(tree);
      recorder.record(tree, std::move(records), cost, policy->current(), tree.max_layer_size());
    } catch (const ContractViolation& e) {
      rethrow_at_step(tree.current_layer(), e);
    }
  }
  trace.width = tree.max_layer_size();
  return trace;
}

namespace {

double marginal_gap(const TransportPlan& plan, const Configuration& from, const Configuration& to) {
  std::unordered_map<NodeIndex, double> out;
  std::unordered_map<NodeIndex, double> in;
  for (const auto& move : plan.moves) {
    out[move.from] += move.mass;
    in[move.to] += move.mass;
  }
  double gap = 0.0;
  for (NodeIndex u : from.leaves()) gap = std::max(gap, std::abs(out[u] - from.mass(u)));
  for (NodeIndex u : to.leaves()) gap = std::max(gap, std::abs(in[u] - to.mass(u)));
  return gap;
}

}  // namespace

RandomizedResult run_randomized(const Instance& instance, const RunConfig& config) {
  if (config.trials < 1) throw ContractViolation("randomized mode needs at least one trial");

  RandomizedResult result;
  Trace& trace = result.trace;
  trace.run_id = make_run_id(config.policy, instance.name, RunMode::randomized, config.seed);
  trace.policy = config.policy;
  trace.instance = instance.name;
  trace.width = instance.width;
  trace.width_source = WidthSource::instance;

  // One pass fixes the trees, configurations and couplings shared by all trials.
  auto policy = make_policy(config.policy);
  Recorder recorder(trace, config.monitoring());
  LayeredTree tree;
  std::vector<TransportPlan> plans;
  plans.reserve(instance.layers.size());
  for (const auto& update : instance.layers) {
    try {
      auto records = tree.apply_layer(update);
      const Configuration previous = policy->current();
      const double cost = policy->step(tree);
      result.fractional_cost += cost;
      plans.push_back(ot_coupling(tree, previous, policy->current()));
      result.marginal_error =
          std::max(result.marginal_error, marginal_gap(plans.back(), previous, policy->current()));
      recorder.record(tree, std::move(records), cost, policy->current(), instance.width);
    } catch (const ContractViolation& e) {
      rethrow_at_step(tree.current_layer(), e);
    }
  }

  result.fractional = trace;

  std::vector<double> step_sum(plans.size(), 0.0);
  result.costs.reserve(config.trials);
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    Rng rng = substream(config.seed, "trials", trial);
    NodeIndex position = kRoot;
    double cost = 0.0;
    for (std::size_t k = 0; k < plans.size(); ++k) {
      const NodeIndex next = sample_transition(plans[k], position, rng);
      const auto walked = static_cast<double>(tree.distance(position, next));
      step_sum[k] += walked;
      cost += walked;
      position = next;
    }
    result.costs.push_back(cost);
  }

  const auto n = static_cast<double>(config.trials);
  double sum = 0.0;
  for (double c : result.costs) sum += c;
  result.mean_cost = sum / n;
  double squares = 0.0;
  for (double c : result.costs) squares += (c - result.mean_cost) * (c - result.mean_cost);
  result.stderr_cost = config.trials > 1 ? std::sqrt(squares / (n - 1.0) / n) : 0.0;

  // The reported steps carry the sampled mean; the potential stays the
  // fractional one since it bounds the expected cost.
  double cumulative = 0.0;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    auto& step = trace.steps[k];
    step.cost_delta = step_sum[k] / n;
    cumulative += step.cost_delta;
    step.cumulative_cost = cumulative;
    step.ratio = cumulative / static_cast<double>(step.t);
  }
  return result;
}

}  // namespace lgt
