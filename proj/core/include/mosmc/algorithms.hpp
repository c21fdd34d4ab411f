#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mosmc/geometry.hpp"
#include "mosmc/heuristics.hpp"
#include "mosmc/mdp.hpp"
#include "mosmc/smc.hpp"

namespace mosmc {

enum class Algorithm {
  Incremental,
  WVR,
  FIB,
  FSB,
  /// Evaluation phase alone on m freshly sampled strategies.
  Eval,
};

std::string to_string(Algorithm a);
/// Accepts incremental, wvr, fib, fsb, eval.
Algorithm parse_algorithm(std::string_view name);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::FSB;
  Rule heuristic = Rule::Simple;
  std::uint64_t m = 100;
  std::uint64_t n = 1000;
  std::uint64_t iterations = 10;
  double alpha = 0.1;
  double epsilon = 0.01;
  double batch_factor = 0.1;
  std::uint64_t strategy_seed = 1;
  std::uint64_t simulation_seed = 0;
  std::uint64_t step_limit = kDefaultStepLimit;
  std::optional<std::vector<double>> reference;
  // Incremental stop conditions, checked between strategies.
  std::optional<double> timeout_seconds;
  std::optional<std::uint64_t> max_batches;
  std::optional<std::uint64_t> max_runs;
  std::size_t workers = 1;
  bool filter_duplicates = true;

  /// c1 (m=100, n=1000), c2 (m=1000, n=100), c3 (m=3333, n=30); all I=10, alpha=0.1.
  static ExperimentConfig preset(std::string_view name);
  void apply_preset(std::string_view name);

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct IterationRecord {
  std::uint64_t iteration = 0;
  /// Strategies that received runs in this iteration (incremental: batch size so far).
  std::uint64_t survivors = 0;
  std::uint64_t runs = 0;
  /// WVR weight vector used in this round (empty for round 1 and other algorithms).
  std::vector<double> weights;
};

/// One completed strategy of the incremental scheme.
struct TrajectoryPoint {
  std::uint64_t batch = 0;
  std::uint64_t position = 0;  // 1-based index within the batch
  StrategyId id;
  std::uint64_t runs = 0;
  std::uint64_t cumulative_runs = 0;
};

struct RunAccounting {
  std::uint64_t heuristic_budget = 0;
  std::uint64_t heuristic_runs = 0;
  std::uint64_t evaluation_budget = 0;
  std::uint64_t evaluation_runs = 0;
  /// Budget left over by floor rounding and not spent by any phase.
  std::uint64_t unused = 0;
  std::uint64_t transitions = 0;
  std::uint64_t truncated_runs = 0;

  std::uint64_t total_runs() const { return heuristic_runs + evaluation_runs; }
};

struct ExperimentReport {
  ExperimentConfig config;
  FrontApproximation under{FrontKind::Under, 2, {}};
  /// Only produced by the incremental scheme.
  FrontApproximation over{FrontKind::Over, 2, {}};
  StrategyStats heuristic_stats;
  StrategyStats evaluation_stats;
  std::vector<StrategyId> candidates;
  std::vector<IterationRecord> iterations;
  std::vector<TrajectoryPoint> trajectory;
  RunAccounting accounting;
  std::uint64_t sampled_strategies = 0;
  std::string stop_reason;
  bool approximate = false;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

struct EvalOutcome {
  StrategyStats stats;
  FrontApproximation under{FrontKind::Under, 2, {}};
  std::uint64_t runs = 0;
  std::uint64_t unused = 0;
};

/// Evaluates every candidate from scratch with floor(budget/|C|) runs at
/// confidence 1 - alpha/|C| using evaluation-phase seeds.
EvalOutcome eval_phase(std::span<const StrategyId> candidates, std::uint64_t budget, double alpha,
                       const SmcEngine& engine);

ExperimentReport inc_samp(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query);
ExperimentReport wvr(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query);
ExperimentReport fib(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query);
ExperimentReport fsb(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query);
ExperimentReport eval_only(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query);

/// Dispatches on config.algorithm.
ExperimentReport run_algorithm(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query);

}  // namespace mosmc
