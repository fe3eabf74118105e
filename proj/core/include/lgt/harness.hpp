#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lgt/adversaries.hpp"
#include "lgt/entropic_policy.hpp"
#include "lgt/layered_tree.hpp"
#include "lgt/policy.hpp"

namespace lgt {

enum class RunMode { fractional, randomized };
/// Where the potential's w comes from: the instance header or, for adaptive
/// adversaries, the widest layer seen so far.
enum class WidthSource { instance, running_max };

std::string_view to_string(RunMode mode);
std::string_view to_string(WidthSource source);
std::optional<RunMode> parse_run_mode(std::string_view name);
std::optional<WidthSource> parse_width_source(std::string_view name);

struct RunConfig {
  PolicyKind policy = PolicyKind::entropic;
  RunMode mode = RunMode::fractional;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  /// Unset means: on for the entropic policy, off otherwise.
  std::optional<bool> potential_monitor;

  bool monitoring() const { return potential_monitor.value_or(policy == PolicyKind::entropic); }
};

struct StepRecord {
  std::size_t t = 0;
  std::size_t layer_size = 0;
  std::vector<DeactivationRecord> deactivations;
  std::size_t deactivated_edges = 0;  // cumulative L(t)
  double cost_delta = 0.0;
  double cumulative_cost = 0.0;
  std::size_t opt = 0;
  double ratio = 0.0;
  std::optional<PotentialBreakdown> potential;

  std::optional<double> slack() const {
    if (!potential) return std::nullopt;
    return potential->total - cumulative_cost;
  }
};

struct Trace {
  std::string run_id;
  PolicyKind policy = PolicyKind::entropic;
  std::string instance;
  std::size_t width = 1;
  WidthSource width_source = WidthSource::instance;
  std::vector<StepRecord> steps;

  double final_cost() const { return steps.empty() ? 0.0 : steps.back().cumulative_cost; }
  double final_ratio() const { return steps.empty() ? 0.0 : steps.back().ratio; }
};

/// Relative tolerance of the potential monitor: slack must stay >= -tol * t.
inline constexpr double kPotentialSlackTol = 1e-6;

/// True if any monitored step has slack below -kPotentialSlackTol * t.
bool potential_violated(const Trace& trace);

std::string make_run_id(PolicyKind policy, std::string_view instance, RunMode mode,
                        std::uint64_t seed);

Trace run_fractional(const Instance& instance, const RunConfig& config);
Trace run_fractional(AdaptiveAdversary& adversary, const RunConfig& config);

struct RandomizedResult {
  /// Per-step costs averaged over the trials.
  Trace trace;
  std::vector<double> costs;
  double mean_cost = 0.0;
  double stderr_cost = 0.0;
  /// The same policy in fractional mode; its slack is what the monitor checks.
  Trace fractional;
  double fractional_cost = 0.0;
  /// Worst deviation of any coupling's marginals from the two configurations.
  double marginal_error = 0.0;
};

/// Samples `config.trials` agents; trial i draws from substream(seed, "trials", i).
RandomizedResult run_randomized(const Instance& instance, const RunConfig& config);

}  // namespace lgt
