#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "mosmc/lss.hpp"
#include "mosmc/simulation.hpp"
#include "mosmc/statistics.hpp"

namespace mosmc {

/// Per-dimension estimate inside a confidence box.
struct DimensionEstimate {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  double half_width() const { return (upper - lower) / 2.0; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Simultaneous confidence box around a strategy's mean vector, valid with
/// probability `confidence` (per-dimension intervals at (1-confidence)/d).
struct ConfidenceBox {
  std::vector<DimensionEstimate> dims;
  double confidence = 0.0;
  /// Set when some dimension used a Student-t interval, which is not sound.
  bool approximate = false;

  std::size_t dimension() const { return dims.size(); }
  std::vector<double> means() const;
  bool contains(std::span<const double> point) const;
};

struct DimensionAccumulator {
  SampleSummary samples;
  std::uint64_t successes = 0;  // reachability dimensions

  bool operator==(const DimensionAccumulator& o) const;
};

struct StrategyRecord {
  StrategyId id;
  std::vector<DimensionAccumulator> dims;
  std::uint64_t runs = 0;
  std::uint64_t transitions = 0;
  /// Runs that hit the step limit with a reachability objective unresolved
  /// (counted as value 0).
  std::uint64_t truncated_runs = 0;
  ConfidenceBox box;
};

/// Evaluated strategies keyed (and therefore iterated) by identifier.
using StrategyStats = std::map<StrategyId, StrategyRecord>;

enum class Phase : std::uint8_t { Heuristic = 0, Evaluation = 1 };

/// Derives per-run simulation seeds. (phase, sigma, run index) is packed
/// injectively into 64 bits and passed through a bijective mix keyed by the
/// global seed, so distinct triples always receive distinct seeds.
class SeedContext {
 public:
  static constexpr std::uint64_t kMaxRunIndex = (std::uint64_t{1} << 31) - 1;

  explicit SeedContext(std::uint64_t global_seed) : global_(global_seed) {}

  std::uint64_t global_seed() const { return global_; }
  std::uint64_t run_seed(Phase phase, StrategyId sigma, std::uint64_t run_index) const;

 private:
  std::uint64_t global_;
};

struct RunCount {
  std::uint64_t runs = 0;
};
struct TargetPrecision {
  double epsilon = 0.0;
};
using RunBudget = std::variant<RunCount, TargetPrecision>;

/// Recomputes the box of `record` from its accumulators at the given
/// confidence: Clopper-Pearson for reachability, Hoeffding for expected
/// rewards with declared bounds, Student-t otherwise (flagged approximate).
ConfidenceBox compute_box(const StrategyRecord& record, const MultiQuery& query, double confidence);

/// Runs needed so every dimension's interval has half-width <= epsilon at
/// the given per-strategy confidence.
std::uint64_t precision_runs(const MultiQuery& query, double confidence, double epsilon);

/// SMC(sigma, gamma, budget): simulates runs under LSS strategy sigma,
/// appends them to the record and refreshes its box.
class SmcEngine {
 public:
  SmcEngine(const Simulator& sim, SeedContext seeds, std::size_t workers = 1);

  const Simulator& simulator() const { return *sim_; }
  const SeedContext& seeds() const { return seeds_; }
  std::size_t workers() const { return workers_; }

  /// Run indices continue from record.runs, so evaluating n then n more
  /// equals evaluating 2n at once. Throws StatisticalAbort when an
  /// expected-reward run is truncated or a sample leaves its declared bounds;
  /// the record is left unchanged on any error.
  void evaluate(StrategyRecord& record, double confidence, const RunBudget& budget, Phase phase) const;

 private:
  const Simulator* sim_;
  SeedContext seeds_;
  std::size_t workers_;
};

/// Free-function form of SmcEngine::evaluate on an entry of `stats`.
StrategyRecord& smc_evaluate(const SmcEngine& engine, StrategyStats& stats, StrategyId sigma,
                             double confidence, const RunBudget& budget, Phase phase);

}  // namespace mosmc
