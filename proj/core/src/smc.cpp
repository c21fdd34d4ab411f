#include "mosmc/smc.hpp"

#include <algorithm>
#include <sstream>

#include "mosmc/hash.hpp"
#include "mosmc/parallel.hpp"

namespace mosmc {

namespace {

// Below this many runs the thread start-up cost dominates.
constexpr std::uint64_t kParallelThreshold = 512;

}  // namespace

std::vector<double> ConfidenceBox::means() const {
  std::vector<double> out;
  out.reserve(dims.size());
  for (const auto& d : dims) out.push_back(d.mean);
  return out;
}

bool ConfidenceBox::contains(std::span<const double> point) const {
  if (point.size() != dims.size()) return false;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!dims[i].contains(point[i])) return false;
  }
  return true;
}

bool DimensionAccumulator::operator==(const DimensionAccumulator& o) const {
  return successes == o.successes && samples.count == o.samples.count && samples.sum == o.samples.sum &&
         samples.sum_sq == o.samples.sum_sq && samples.min == o.samples.min && samples.max == o.samples.max;
}

std::uint64_t SeedContext::run_seed(Phase phase, StrategyId sigma, std::uint64_t run_index) const {
  if (run_index > kMaxRunIndex) throw ConfigError("run index exceeds 2^31 - 1 for one strategy");
  const std::uint64_t key = (static_cast<std::uint64_t>(phase) << 63) |
                            (static_cast<std::uint64_t>(sigma.value) << 31) | run_index;
  return mix64(key ^ mix64(global_));
}

ConfidenceBox compute_box(const StrategyRecord& record, const MultiQuery& query, double confidence) {
  const std::size_t d = query.dimension();
  if (record.dims.size() != d) throw ConfigError("record dimension does not match query");
  const double alpha_dim = (1.0 - confidence) / static_cast<double>(d);
  ConfidenceBox box;
  box.confidence = confidence;
  box.dims.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    const Objective& o = query.objectives[i];
    const DimensionAccumulator& acc = record.dims[i];
    if (acc.samples.count == 0) throw ConfigError("cannot build a confidence box without samples");
    DimensionEstimate est;
    if (o.kind == ObjectiveKind::ProbReach) {
      const Interval ci = clopper_pearson(acc.successes, acc.samples.count, alpha_dim);
      est.mean = static_cast<double>(acc.successes) / static_cast<double>(acc.samples.count);
      est.lower = ci.lower;
      est.upper = ci.upper;
    } else if (o.bounds) {
      const Interval ci = mean_ci(acc.samples, alpha_dim, CiMethod::Hoeffding, o.bounds);
      est.mean = acc.samples.mean();
      est.lower = std::max(ci.lower, o.bounds->lo);
      est.upper = std::min(ci.upper, o.bounds->hi);
    } else {
      const Interval ci = mean_ci(acc.samples, alpha_dim, CiMethod::StudentT);
      est.mean = acc.samples.mean();
      est.lower = ci.lower;
      est.upper = ci.upper;
      box.approximate = true;
    }
    box.dims.push_back(est);
  }
  return box;
}

std::uint64_t precision_runs(const MultiQuery& query, double confidence, double epsilon) {
  const double alpha_dim = (1.0 - confidence) / static_cast<double>(query.dimension());
  std::uint64_t n = 1;
  for (const Objective& o : query.objectives) {
    n = std::max(n, runs_for_precision(epsilon, alpha_dim, o.kind, o.bounds));
  }
  return n;
}

SmcEngine::SmcEngine(const Simulator& sim, SeedContext seeds, std::size_t workers)
    : sim_(&sim), seeds_(seeds), workers_(std::max<std::size_t>(1, workers)) {}

void SmcEngine::evaluate(StrategyRecord& record, double confidence, const RunBudget& budget,
                         Phase phase) const {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
  const MultiQuery& query = sim_->query();
  const std::size_t d = query.dimension();
  const std::uint64_t n = std::holds_alternative<RunCount>(budget)
                              ? std::get<RunCount>(budget).runs
                              : precision_runs(query, confidence, std::get<TargetPrecision>(budget).epsilon);
  if (n == 0) throw ConfigError("SMC invoked with an empty run budget");
  const std::uint64_t first = record.runs;
  if (first + n - 1 > SeedContext::kMaxRunIndex) throw ConfigError("too many runs for one strategy");

  std::vector<double> values(n * d);
  std::vector<RunStatus> status(n);
  const LssChooser chooser{record.id};
  parallel_for(n, n >= kParallelThreshold ? workers_ : 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const std::uint64_t seed = seeds_.run_seed(phase, record.id, first + r);
      status[r] = sim_->run_into(chooser, seed, std::span<double>(values.data() + r * d, d));
    }
  });

  // Merge strictly in run-index order so results do not depend on workers.
  StrategyRecord updated = record;
  if (updated.dims.empty()) updated.dims.resize(d);
  for (std::uint64_t r = 0; r < n; ++r) {
    const std::uint64_t seed = seeds_.run_seed(phase, record.id, first + r);
    if (status[r].truncated) {
      for (std::size_t i = 0; i < d; ++i) {
        if ((status[r].unresolved >> i) & 1U && query.objectives[i].kind == ObjectiveKind::ExpReward) {
          std::ostringstream msg;
          msg << "strategy " << record.id.value << ", run seed " << seed << ": run exceeded the limit of "
              << sim_->step_limit() << " transitions before reaching the goal of objective " << (i + 1)
              << " (expected reward undefined)";
          throw StatisticalAbort(msg.str());
        }
      }
      ++updated.truncated_runs;
    }
    for (std::size_t i = 0; i < d; ++i) {
      const double v = values[r * d + i];
      const Objective& o = query.objectives[i];
      if (o.kind == ObjectiveKind::ExpReward && o.bounds && (v < o.bounds->lo || v > o.bounds->hi)) {
        std::ostringstream msg;
        msg << "strategy " << record.id.value << ", run seed " << seed << ": sample " << v
            << " of objective " << (i + 1) << " lies outside its declared bounds [" << o.bounds->lo << ", "
            << o.bounds->hi << "]";
        throw StatisticalAbort(msg.str());
      }
      updated.dims[i].samples.add(v);
      if (o.kind == ObjectiveKind::ProbReach && v == 1.0) ++updated.dims[i].successes;
    }
    updated.transitions += status[r].steps;
  }
  updated.runs += n;
  updated.box = compute_box(updated, query, confidence);
  record = std::move(updated);
}

StrategyRecord& smc_evaluate(const SmcEngine& engine, StrategyStats& stats, StrategyId sigma,
                             double confidence, const RunBudget& budget, Phase phase) {
  auto [it, inserted] = stats.try_emplace(sigma);
  if (inserted) it->second.id = sigma;
  try {
    engine.evaluate(it->second, confidence, budget, phase);
  } catch (...) {
    if (inserted) stats.erase(it);
    throw;
  }
  return it->second;
}

}  // namespace mosmc
