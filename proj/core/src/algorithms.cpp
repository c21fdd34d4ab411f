#include "mosmc/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "mosmc/errors.hpp"
#include "mosmc/lss.hpp"
#include "mosmc/simulation.hpp"
#include "mosmc/statistics.hpp"

namespace mosmc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t checked_product(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / 4 / a) {
    throw ConfigError(std::string(what) + " overflows");
  }
  return a * b;
}

std::uint64_t phase_budget(const ExperimentConfig& c) {
  return checked_product(checked_product(c.iterations, c.m, "I*m"), c.n, "I*m*n");
}

double heuristic_confidence(const ExperimentConfig& c) { return 1.0 - c.alpha / static_cast<double>(c.m); }

void tally(const StrategyStats& stats, ExperimentReport& report) {
  for (const auto& [id, rec] : stats) {
    report.accounting.transitions += rec.transitions;
    report.accounting.truncated_runs += rec.truncated_runs;
    if (rec.box.approximate) report.approximate = true;
  }
}

void finish(ExperimentReport& report, Clock::time_point start) {
  report.accounting.transitions = 0;
  report.accounting.truncated_runs = 0;
  tally(report.heuristic_stats, report);
  tally(report.evaluation_stats, report);
  if (report.accounting.truncated_runs > 0) {
    report.warnings.push_back(std::to_string(report.accounting.truncated_runs) +
                              " run(s) hit the step limit of " + std::to_string(report.config.step_limit) +
                              " transitions with a reachability goal unresolved and counted as 0");
  }
  if (report.approximate) {
    report.warnings.push_back(
        "an expected-reward objective has no declared bounds; its Student-t intervals are approximate and the "
        "front carries no confidence guarantee");
  }
  report.wall_seconds = seconds_since(start);
}

struct Setup {
  Simulator sim;
  SmcEngine engine;
  std::vector<Direction> dirs;

  Setup(const ExperimentConfig& c, const Mdp& model, const MultiQuery& query)
      : sim(model, query, c.step_limit),
        engine(sim, SeedContext(c.simulation_seed), c.workers),
        dirs(query.directions()) {}
};

std::vector<StrategyId> sorted(std::vector<StrategyId> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

void evaluate_candidates(ExperimentReport& report, const ExperimentConfig& c, const SmcEngine& engine,
                         std::span<const StrategyId> candidates) {
  EvalOutcome out = eval_phase(candidates, phase_budget(c), c.alpha, engine);
  report.evaluation_stats = std::move(out.stats);
  report.under = std::move(out.under);
  report.accounting.evaluation_budget = phase_budget(c);
  report.accounting.evaluation_runs = out.runs;
  report.accounting.unused += out.unused;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Incremental: return "incremental";
    case Algorithm::WVR: return "wvr";
    case Algorithm::FIB: return "fib";
    case Algorithm::FSB: return "fsb";
    case Algorithm::Eval: return "eval";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::Incremental, Algorithm::WVR, Algorithm::FIB, Algorithm::FSB, Algorithm::Eval}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected incremental, wvr, fib, fsb or eval)");
}

ExperimentConfig ExperimentConfig::preset(std::string_view name) {
  ExperimentConfig c;
  c.apply_preset(name);
  return c;
}

void ExperimentConfig::apply_preset(std::string_view name) {
  alpha = 0.1;
  iterations = 10;
  if (name == "c1") {
    m = 100;
    n = 1000;
  } else if (name == "c2") {
    m = 1000;
    n = 100;
  } else if (name == "c3") {
    m = 3333;
    n = 30;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected c1, c2 or c3)");
  }
}

void ExperimentConfig::validate() const {
  if (m == 0) throw ConfigError("m: must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1)");
  if (step_limit == 0) throw ConfigError("step_limit: must be at least 1");
  if (workers == 0) throw ConfigError("workers: must be at least 1");
  if (algorithm == Algorithm::Incremental) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon: must be positive");
    if (!(batch_factor > 0.0 && batch_factor < 1.0)) throw ConfigError("batch_factor: must lie in (0, 1)");
    if (!timeout_seconds && !max_batches && !max_runs) {
      throw ConfigError("incremental sampling needs a stop condition (timeout, max_batches or max_runs)");
    }
    if (timeout_seconds && !(*timeout_seconds >= 0.0)) throw ConfigError("timeout: must be non-negative");
  } else {
    if (n == 0) throw ConfigError("n: must be at least 1");
    if (iterations == 0) throw ConfigError("iterations: must be at least 1");
    phase_budget(*this);
  }
}

EvalOutcome eval_phase(std::span<const StrategyId> candidates, std::uint64_t budget, double alpha,
                       const SmcEngine& engine) {
  if (candidates.empty()) throw ConfigError("evaluation phase needs at least one candidate");
  const std::uint64_t k = candidates.size();
  const std::uint64_t per = budget / k;
  if (per == 0) {
    throw ConfigError("evaluation budget " + std::to_string(budget) + " is smaller than the " +
                      std::to_string(k) + " candidates");
  }
  const double confidence = 1.0 - alpha / static_cast<double>(k);
  EvalOutcome out;
  for (StrategyId sigma : candidates) {
    smc_evaluate(engine, out.stats, sigma, confidence, RunCount{per}, Phase::Evaluation);
  }
  out.runs = per * k;
  out.unused = budget - out.runs;
  out.under = build_front(out.stats, engine.simulator().query().directions(), FrontKind::Under);
  return out;
}

ExperimentReport inc_samp(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query) {
  const auto start = Clock::now();
  config.validate();
  for (const Objective& o : query.objectives) {
    if (o.kind == ObjectiveKind::ExpReward && !o.bounds) {
      throw ConfigError("objective '" + o.label +
                        "': incremental sampling with a target precision needs declared reward bounds");
    }
  }
  Setup s(config, model, query);
  ExperimentReport report;
  report.config = config;
  StrategySampler sampler(config.strategy_seed, config.filter_duplicates);

  std::uint64_t cumulative = 0;
  for (std::uint64_t batch = 1;; ++batch) {
    if (config.max_batches && batch > *config.max_batches) {
      report.stop_reason = "max_batches";
      break;
    }
    const double confidence =
        1.0 - batch_alpha(config.alpha, config.batch_factor, batch) / static_cast<double>(config.m);
    const std::uint64_t runs = precision_runs(query, confidence, config.epsilon);
    IterationRecord rec{batch, 0, 0, {}};
    for (std::uint64_t j = 1; j <= config.m; ++j) {
      if (config.timeout_seconds && seconds_since(start) >= *config.timeout_seconds) {
        report.stop_reason = "timeout";
      } else if (config.max_runs && cumulative + runs > *config.max_runs) {
        report.stop_reason = "max_runs";
      }
      if (!report.stop_reason.empty()) break;
      const StrategyId sigma = sampler.next();
      smc_evaluate(s.engine, report.heuristic_stats, sigma, confidence, RunCount{runs}, Phase::Heuristic);
      cumulative += runs;
      ++rec.survivors;
      rec.runs += runs;
      report.trajectory.push_back({batch, j, sigma, runs, cumulative});
    }
    if (rec.survivors > 0) report.iterations.push_back(rec);
    if (!report.stop_reason.empty()) break;
  }
  report.sampled_strategies = sampler.emitted();
  report.accounting.heuristic_runs = cumulative;
  report.accounting.heuristic_budget = config.max_runs.value_or(cumulative);
  report.under = build_front(report.heuristic_stats, s.dirs, FrontKind::Under);
  report.over = build_front(report.heuristic_stats, s.dirs, FrontKind::Over);
  for (const auto& [id, rec] : report.heuristic_stats) report.candidates.push_back(id);
  finish(report, start);
  return report;
}

ExperimentReport wvr(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query) {
  const auto start = Clock::now();
  config.validate();
  Setup s(config, model, query);
  ExperimentReport report;
  report.config = config;
  StrategySampler sampler(config.strategy_seed, config.filter_duplicates);
  const double confidence = heuristic_confidence(config);
  auto& stats = report.heuristic_stats;

  const std::vector<StrategyId> sigma = sorted(sampler.sample(config.m));
  std::uint64_t spent = 0;
  for (StrategyId id : sigma) {
    smc_evaluate(s.engine, stats, id, confidence, RunCount{config.n}, Phase::Heuristic);
  }
  spent += config.n * sigma.size();
  report.iterations.push_back({1, sigma.size(), config.n * sigma.size(), {}});

  // The `count` best strategies of the global set under weight w, ties by id.
  auto best = [&](const std::vector<double>& w, std::size_t count) {
    std::vector<std::pair<double, StrategyId>> scored;
    scored.reserve(sigma.size());
    for (StrategyId id : sigma) {
      const auto x = normalize(stats.at(id).box.means(), s.dirs);
      double v = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) v += w[i] * x[i];
      scored.emplace_back(v, id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<StrategyId> out;
    for (std::size_t i = 0; i < count && i < scored.size(); ++i) out.push_back(scored[i].second);
    return out;
  };

  for (std::uint64_t i = 2; i <= config.iterations; ++i) {
    const auto w = max_gap_direction(build_front(stats, s.dirs, FrontKind::Under),
                                     build_front(stats, s.dirs, FrontKind::Over), s.dirs);
    std::uint64_t round_runs = 0;
    std::vector<StrategyId> local = best(w, sigma.size() / 2);
    do {
      for (StrategyId id : local) {
        smc_evaluate(s.engine, stats, id, confidence, RunCount{config.n}, Phase::Heuristic);
      }
      round_runs += config.n * local.size();
      local = best(w, local.size() / 2);
    } while (!local.empty());
    spent += round_runs;
    report.iterations.push_back({i, sigma.size(), round_runs, w});
  }

  report.candidates = select_candidates(config.heuristic, stats, s.dirs);
  report.sampled_strategies = sampler.emitted();
  report.accounting.heuristic_budget = phase_budget(config);
  report.accounting.heuristic_runs = spent;
  report.accounting.unused = report.accounting.heuristic_budget > spent ? report.accounting.heuristic_budget - spent : 0;
  evaluate_candidates(report, config, s.engine, report.candidates);
  report.stop_reason = "completed";
  finish(report, start);
  return report;
}

ExperimentReport fib(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query) {
  const auto start = Clock::now();
  config.validate();
  Setup s(config, model, query);
  ExperimentReport report;
  report.config = config;
  StrategySampler sampler(config.strategy_seed, config.filter_duplicates);
  const double confidence = heuristic_confidence(config);
  auto& stats = report.heuristic_stats;

  std::vector<StrategyId> current = sorted(sampler.sample(config.m));
  const std::uint64_t per_iteration = config.m * config.n;
  std::uint64_t carry = 0;
  std::uint64_t spent = 0;
  for (std::uint64_t i = 1; i <= config.iterations; ++i) {
    const std::uint64_t budget = per_iteration + carry;
    const std::uint64_t per = budget / current.size();
    for (StrategyId id : current) {
      smc_evaluate(s.engine, stats, id, confidence, RunCount{per}, Phase::Heuristic);
    }
    const std::uint64_t used = per * current.size();
    spent += used;
    carry = budget - used;
    report.iterations.push_back({i, current.size(), used, {}});
    current = select_candidates(config.heuristic, stats, current, s.dirs);
  }

  report.candidates = select_candidates(config.heuristic, stats, current, s.dirs);
  report.sampled_strategies = sampler.emitted();
  report.accounting.heuristic_budget = phase_budget(config);
  report.accounting.heuristic_runs = spent;
  report.accounting.unused = carry;
  evaluate_candidates(report, config, s.engine, report.candidates);
  report.stop_reason = "completed";
  finish(report, start);
  return report;
}

ExperimentReport fsb(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query) {
  const auto start = Clock::now();
  config.validate();
  Setup s(config, model, query);
  ExperimentReport report;
  report.config = config;
  StrategySampler sampler(config.strategy_seed, config.filter_duplicates);
  const double confidence = heuristic_confidence(config);
  auto& stats = report.heuristic_stats;

  const std::int64_t n = static_cast<std::int64_t>(config.n);
  const std::int64_t per_iteration = static_cast<std::int64_t>(config.m) * n;
  std::vector<StrategyId> survivors;
  std::vector<StrategyId> newcomers = sorted(sampler.sample(config.m));
  std::int64_t carry = 0;
  std::uint64_t spent = 0;
  for (std::uint64_t i = 1; i <= config.iterations; ++i) {
    const std::int64_t budget = per_iteration + carry;
    for (StrategyId id : survivors) {
      smc_evaluate(s.engine, stats, id, confidence, RunCount{config.n}, Phase::Heuristic);
    }
    for (StrategyId id : newcomers) {
      smc_evaluate(s.engine, stats, id, confidence, RunCount{i * config.n}, Phase::Heuristic);
    }
    const std::uint64_t used = config.n * survivors.size() + i * config.n * newcomers.size();
    spent += used;
    carry = budget - static_cast<std::int64_t>(used);

    std::vector<StrategyId> pool = survivors;
    pool.insert(pool.end(), newcomers.begin(), newcomers.end());
    pool = sorted(std::move(pool));
    report.iterations.push_back({i, pool.size(), used, {}});
    survivors = select_candidates(config.heuristic, stats, pool, s.dirs);
    newcomers.clear();
    if (i < config.iterations) {
      const std::int64_t next_budget = per_iteration + carry;
      const std::int64_t room = next_budget - n * static_cast<std::int64_t>(survivors.size());
      const std::int64_t k = room > 0 ? room / (static_cast<std::int64_t>(i + 1) * n) : 0;
      newcomers = sorted(sampler.sample(static_cast<std::size_t>(k)));
    }
  }

  report.candidates = select_candidates(config.heuristic, stats, survivors, s.dirs);
  report.sampled_strategies = sampler.emitted();
  report.accounting.heuristic_budget = phase_budget(config);
  report.accounting.heuristic_runs = spent;
  report.accounting.unused = carry > 0 ? static_cast<std::uint64_t>(carry) : 0;
  evaluate_candidates(report, config, s.engine, report.candidates);
  report.stop_reason = "completed";
  finish(report, start);
  return report;
}

ExperimentReport eval_only(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query) {
  const auto start = Clock::now();
  config.validate();
  Setup s(config, model, query);
  ExperimentReport report;
  report.config = config;
  StrategySampler sampler(config.strategy_seed, config.filter_duplicates);
  report.candidates = sorted(sampler.sample(config.m));
  report.sampled_strategies = sampler.emitted();
  evaluate_candidates(report, config, s.engine, report.candidates);
  report.stop_reason = "completed";
  finish(report, start);
  return report;
}

ExperimentReport run_algorithm(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query) {
  switch (config.algorithm) {
    case Algorithm::Incremental: return inc_samp(config, model, query);
    case Algorithm::WVR: return wvr(config, model, query);
    case Algorithm::FIB: return fib(config, model, query);
    case Algorithm::FSB: return fsb(config, model, query);
    case Algorithm::Eval: return eval_only(config, model, query);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace mosmc
