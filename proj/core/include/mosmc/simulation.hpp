#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mosmc/errors.hpp"
#include "mosmc/hash.hpp"
#include "mosmc/lss.hpp"
#include "mosmc/mdp.hpp"

namespace mosmc {

inline constexpr std::uint64_t kDefaultStepLimit = 10'000;

struct RunOutcome {
  std::vector<double> values;
  std::uint64_t steps = 0;
  bool truncated = false;
  /// Bit i set when objective i had not resolved when the run ended.
  std::uint64_t unresolved = 0;

  bool operator==(const RunOutcome&) const = default;
};

/// Path of a run, recorded only when requested.
struct RunTrace {
  std::vector<StateIndex> states;
  std::vector<ActionIndex> actions;
  std::vector<std::size_t> global_branches;
};

struct RunStatus {
  std::uint64_t steps = 0;
  bool truncated = false;
  std::uint64_t unresolved = 0;
};

/// Simulates runs of a validated model against a multi-objective query.
///
/// Every run starts in the initial state. Each transition consumes exactly
/// one uniform draw from a SplitMix64 stream seeded with the run seed and
/// picks the branch by inverse CDF over the action's ordered branch list.
/// Objective i freezes on first entry into its goal set (the initial state
/// counts). Expected-reward objectives accumulate branch rewards up to and
/// including the transition that enters the goal; reachability objectives
/// become 1 on goal entry, and 0 as soon as no goal state remains reachable.
/// The run ends when all objectives froze or after step_limit transitions.
class Simulator {
 public:
  Simulator(const Mdp& model, const MultiQuery& query, std::uint64_t step_limit = kDefaultStepLimit);

  const Mdp& model() const { return *model_; }
  const MultiQuery& query() const { return *query_; }
  std::size_t dimension() const { return objectives_.size(); }
  std::uint64_t step_limit() const { return step_limit_; }

  template <class Chooser>
  RunStatus run_into(Chooser&& choose, std::uint64_t run_seed, std::span<double> values,
                     RunTrace* trace = nullptr) const;

  template <class Chooser>
  RunOutcome run(Chooser&& choose, std::uint64_t run_seed, RunTrace* trace = nullptr) const {
    RunOutcome out;
    out.values.assign(dimension(), 0.0);
    const RunStatus status = run_into(choose, run_seed, out.values, trace);
    out.steps = status.steps;
    out.truncated = status.truncated;
    out.unresolved = status.unresolved;
    return out;
  }

  RunOutcome run(StrategyId sigma, std::uint64_t run_seed, RunTrace* trace = nullptr) const {
    return run(LssChooser{sigma}, run_seed, trace);
  }

 private:
  struct CompiledObjective {
    bool expected_reward = false;
    std::vector<char> goal;
    std::vector<char> viable;  // reachability only: goal still reachable
    std::span<const double> rewards;
  };

  std::uint64_t settle(StateIndex s, std::uint64_t pending, std::span<double> values) const;

  const Mdp* model_;
  const MultiQuery* query_;
  std::uint64_t step_limit_;
  std::vector<CompiledObjective> objectives_;
};

/// Free-function form: one run under an arbitrary chooser.
template <class Chooser>
RunOutcome simulate_run(const Simulator& sim, Chooser&& choose, std::uint64_t run_seed) {
  return sim.run(std::forward<Chooser>(choose), run_seed);
}

inline std::uint64_t Simulator::settle(StateIndex s, std::uint64_t pending,
                                       std::span<double> values) const {
  for (std::size_t i = 0; i < objectives_.size(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    if (!(pending & bit)) continue;
    const CompiledObjective& o = objectives_[i];
    if (o.goal[s]) {
      if (!o.expected_reward) values[i] = 1.0;
      pending &= ~bit;
    } else if (!o.expected_reward && !o.viable[s]) {
      values[i] = 0.0;
      pending &= ~bit;
    }
  }
  return pending;
}

template <class Chooser>
RunStatus Simulator::run_into(Chooser&& choose, std::uint64_t run_seed, std::span<double> values,
                              RunTrace* trace) const {
  const Mdp& m = *model_;
  const std::size_t d = objectives_.size();
  for (std::size_t i = 0; i < d; ++i) values[i] = 0.0;
  std::uint64_t pending = d == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;

  SplitMix64 rng(run_seed);
  StateIndex s = m.initial_state();
  if (trace) trace->states.push_back(s);
  pending = settle(s, pending, values);

  std::uint64_t steps = 0;
  while (pending != 0) {
    if (steps == step_limit_) return {steps, true, pending};
    const std::uint32_t k = m.num_actions(s);
    const ActionIndex a = k == 1 ? 0 : static_cast<ActionIndex>(choose(s, k));
    if (a >= k) {
      throw ConfigError("action chooser returned " + std::to_string(a) + " for state " +
                        m.state_name(s) + " with " + std::to_string(k) + " actions");
    }
    const auto bs = m.branches(s, a);
    const double u = rng.next_unit();
    std::size_t b = 0;
    double cumulative = bs[0].probability;
    while (u >= cumulative && b + 1 < bs.size()) cumulative += bs[++b].probability;

    const std::size_t global = m.branch_begin(s, a) + b;
    for (std::size_t i = 0; i < d; ++i) {
      if ((pending >> i) & 1U && objectives_[i].expected_reward) values[i] += objectives_[i].rewards[global];
    }
    s = bs[b].target;
    ++steps;
    if (trace) {
      trace->actions.push_back(a);
      trace->global_branches.push_back(global);
      trace->states.push_back(s);
    }
    pending = settle(s, pending, values);
  }
  return {steps, false, 0};
}

}  // namespace mosmc
