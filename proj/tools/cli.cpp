#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lgt/adversaries.hpp"
#include "lgt/errors.hpp"
#include "lgt/harness.hpp"
#include "lgt/instance_io.hpp"
#include "lgt/report.hpp"
#include "lgt/verify.hpp"

namespace lgt::cli {

namespace {

struct GenArgs {
  std::string family;
  std::optional<std::size_t> width;
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  std::size_t spacing = 1;
  double split_prob = 0.3;
  double kill_prob = 0.2;
  std::string output;
};

struct RunArgs {
  std::string policy;
  std::string instance;
  std::string adversary;
  std::size_t width = 0;
  std::size_t depth = 0;
  std::string mode = "fractional";
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  bool monitor = false;
  bool no_monitor = false;
  std::string report;
  std::string format = "csv";
};

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 42;
};

struct BenchArgs {
  std::vector<std::size_t> widths{2, 4, 8, 16, 32};
  std::size_t depth = 200;
  std::vector<std::string> policies{"entropic", "dfs", "random_dfs", "uniform"};
  std::vector<std::string> families{"star", "comb", "random", "max_mass"};
  std::uint64_t seed = 0;
  std::string report;
  std::string format = "csv";
};

PolicyKind policy_or_throw(const std::string& name) {
  auto kind = parse_policy_kind(name);
  if (!kind) throw MalformedInput("unknown policy '" + name + "'");
  return *kind;
}

ReportFormat format_or_throw(const std::string& name) {
  auto format = parse_report_format(name);
  if (!format) throw MalformedInput("unknown report format '" + name + "'");
  return *format;
}

Instance generate(const std::string& family, std::optional<std::size_t> width, std::size_t depth,
                  std::uint64_t seed, std::size_t spacing, double split_prob, double kill_prob) {
  if (family == "alternating") return gen_alternating(depth);
  if (!width) throw MalformedInput("--width is required for " + family);
  if (family == "star") return gen_star(*width, depth);
  if (family == "comb") return gen_comb(*width, depth, spacing);
  if (family == "random") return gen_random(*width, depth, seed, split_prob, kill_prob);
  throw MalformedInput("unknown instance family '" + family + "'");
}

int do_gen(const GenArgs& args, std::ostream& out) {
  const Instance instance = generate(args.family, args.width, args.depth, args.seed, args.spacing,
                                     args.split_prob, args.kill_prob);
  save_instance(instance, args.output);
  out << "wrote " << instance.name << " (width " << instance.width << ", depth " << instance.depth()
      << ") to " << args.output << '\n';
  return kExitOk;
}

AdaptiveAdversary::Kind adversary_kind(const std::string& name) {
  if (name == "max_mass") return AdaptiveAdversary::Kind::max_mass_killer;
  if (name == "dfs_lengths") return AdaptiveAdversary::Kind::dfs_length_assigner;
  throw MalformedInput("unknown adversary '" + name + "'");
}

int do_run(const RunArgs& args, std::ostream& out) {
  RunConfig config;
  config.policy = policy_or_throw(args.policy);
  auto mode = parse_run_mode(args.mode);
  if (!mode) throw MalformedInput("unknown mode '" + args.mode + "'");
  config.mode = *mode;
  config.trials = args.trials;
  config.seed = args.seed;
  if (args.monitor) config.potential_monitor = true;
  if (args.no_monitor) config.potential_monitor = false;
  const ReportFormat format = format_or_throw(args.format);
  if (args.instance.empty() == args.adversary.empty()) {
    throw MalformedInput("give exactly one of --instance and --adversary");
  }

  Trace trace;
  bool violated = false;
  if (!args.adversary.empty()) {
    if (config.mode != RunMode::fractional) {
      throw MalformedInput("adaptive adversaries run in fractional mode only");
    }
    if (args.width < 1 || args.depth < args.width) {
      throw MalformedInput("--adversary needs --width W >= 1 and --depth T >= W");
    }
    AdaptiveAdversary adversary(adversary_kind(args.adversary), args.width, args.depth);
    trace = run_fractional(adversary, config);
    violated = potential_violated(trace);
  } else {
    const Instance instance = load_instance(args.instance);
    if (config.mode == RunMode::fractional) {
      trace = run_fractional(instance, config);
      violated = potential_violated(trace);
    } else {
      if (config.trials < 1) throw MalformedInput("--trials must be at least 1");
      RandomizedResult result = run_randomized(instance, config);
      out << "trials=" << config.trials << " mean_cost=" << result.mean_cost
          << " stderr=" << result.stderr_cost << " fractional_cost=" << result.fractional_cost
          << '\n';
      violated = potential_violated(result.fractional);
      trace = std::move(result.trace);
    }
  }
  write_report(std::span<const Trace>(&trace, 1), format, args.report);
  out << trace.run_id << ": steps=" << trace.steps.size() << " cost=" << trace.final_cost()
      << " ratio=" << trace.final_ratio() << '\n';
  if (violated) {
    out << "potential monitor: cumulative cost exceeded P(t)\n";
    return kExitViolation;
  }
  return kExitOk;
}

int do_verify(const VerifyArgs& args, std::ostream& out) {
  const auto results = run_verify_suite(args.suite, args.seed);
  bool ok = true;
  for (const auto& r : results) {
    out << format_check(r) << '\n';
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitViolation;
}

std::size_t thread_budget(std::size_t jobs) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LGT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) threads = std::min(threads, static_cast<std::size_t>(cap));
  }
  return std::min(threads, std::max<std::size_t>(jobs, 1));
}

int do_bench(const BenchArgs& args, std::ostream& out) {
  const ReportFormat format = format_or_throw(args.format);
  std::vector<std::function<Trace()>> cells;
  for (const auto& family : args.families) {
    for (std::size_t w : args.widths) {
      for (const auto& name : args.policies) {
        RunConfig config;
        config.policy = policy_or_throw(name);
        config.seed = args.seed;
        const std::size_t depth = args.depth;
        const std::uint64_t seed = args.seed;
        if (family == "max_mass") {
          cells.emplace_back([=] {
            AdaptiveAdversary adversary(AdaptiveAdversary::Kind::max_mass_killer, w, depth);
            return run_fractional(adversary, config);
          });
        } else if (family == "dfs_lengths") {
          if (config.policy != PolicyKind::dfs) continue;
          cells.emplace_back([=] {
            AdaptiveAdversary adversary(AdaptiveAdversary::Kind::dfs_length_assigner, w, depth);
            return run_fractional(adversary, config);
          });
        } else {
          // Fail on bad parameters before any thread starts.
          const Instance instance = generate(family, w, depth, seed, 1, 0.3, 0.2);
          cells.emplace_back([instance, config] { return run_fractional(instance, config); });
        }
      }
    }
  }

  std::vector<Trace> traces(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        traces[i] = cells[i]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t threads = thread_budget(cells.size());
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  write_report(traces, format, args.report);
  bool violated = false;
  for (const auto& trace : traces) {
    out << trace.run_id << ": cost=" << trace.final_cost() << " ratio=" << trace.final_ratio()
        << '\n';
    violated = violated || potential_violated(trace);
  }
  return violated ? kExitViolation : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layered graph traversal: entropic policy, baselines, adversaries, verification"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("family", gen.family, "star | comb | alternating | random")
      ->required()
      ->check(CLI::IsMember({"star", "comb", "alternating", "random"}));
  gen_cmd->add_option("--width", gen.width, "Width w");
  gen_cmd->add_option("--depth", gen.depth, "Depth t")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed (random family)");
  gen_cmd->add_option("--spacing", gen.spacing, "Tooth spacing (comb family)");
  gen_cmd->add_option("--split-prob", gen.split_prob, "Split probability (random family)");
  gen_cmd->add_option("--kill-prob", gen.kill_prob, "Kill probability (random family)");
  gen_cmd->add_option("-o,--output", gen.output, "Output file")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a policy on an instance or adversary");
  run_cmd->add_option("--policy", run_args.policy, "entropic | dfs | random_dfs | uniform")->required();
  auto* instance_opt = run_cmd->add_option("--instance", run_args.instance, "Instance file");
  auto* adversary_opt =
      run_cmd->add_option("--adversary", run_args.adversary, "max_mass | dfs_lengths");
  instance_opt->excludes(adversary_opt);
  run_cmd->add_option("--width", run_args.width, "Adversary width");
  run_cmd->add_option("--depth", run_args.depth, "Adversary horizon");
  run_cmd->add_option("--mode", run_args.mode, "fractional | randomized");
  run_cmd->add_option("--trials", run_args.trials, "Trials in randomized mode");
  run_cmd->add_option("--seed", run_args.seed, "Seed");
  auto* monitor_flag = run_cmd->add_flag("--monitor-potential", run_args.monitor, "Record P(t)");
  run_cmd->add_flag("--no-monitor-potential", run_args.no_monitor, "Do not record P(t)")
      ->excludes(monitor_flag);
  run_cmd->add_option("--report", run_args.report, "Report file")->required();
  run_cmd->add_option("--format", run_args.format, "csv | json");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run the numerical lemma checks");
  verify_cmd->add_option("--suite", verify_args.suite,
                         "all | lemma1 | dynamics | movement | growth | potential | identity");
  verify_cmd->add_option("--seed", verify_args.seed, "Seed");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Sweep widths x policies x families");
  bench_cmd->add_option("--widths", bench.widths, "Comma-separated widths")->delimiter(',');
  bench_cmd->add_option("--depth", bench.depth, "Depth t");
  bench_cmd->add_option("--policies", bench.policies, "Comma-separated policies")->delimiter(',');
  bench_cmd->add_option("--families", bench.families,
                        "Comma-separated: star, comb, alternating, random, max_mass, dfs_lengths")
      ->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed, "Seed");
  bench_cmd->add_option("--report", bench.report, "Report file")->required();
  bench_cmd->add_option("--format", bench.format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*gen_cmd) return do_gen(gen, out);
    if (*run_cmd) return do_run(run_args, out);
    if (*verify_cmd) return do_verify(verify_args, out);
    if (*bench_cmd) return do_bench(bench, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace lgt::cli
