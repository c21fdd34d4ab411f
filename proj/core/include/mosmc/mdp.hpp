#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mosmc {

using StateIndex = std::uint32_t;
using ActionIndex = std::uint32_t;

struct Branch {
  StateIndex target = 0;
  double probability = 0.0;

  bool operator==(const Branch&) const = default;
};

struct ActionSpec {
  std::string name;
  std::vector<Branch> branches;

  bool operator==(const ActionSpec&) const = default;
};

/// One sparse reward entry keyed by (state, action index, target state).
struct RewardEntry {
  StateIndex state = 0;
  ActionIndex action = 0;
  StateIndex target = 0;
  double value = 0.0;

  bool operator==(const RewardEntry&) const = default;
};

/// Sparse reward structure; missing entries are 0.
struct RewardStructure {
  std::string name;
  std::vector<RewardEntry> entries;

  bool operator==(const RewardStructure&) const = default;
};

/// Immutable finite MDP. Actions are stored in a fixed per-state order that
/// strategy sampling depends on; branches are laid out contiguously so that a
/// (state, action, branch) triple has a global branch index.
class Mdp {
 public:
  Mdp() = default;
  Mdp(std::size_t num_states, StateIndex initial,
      std::vector<std::vector<ActionSpec>> actions,
      std::vector<RewardStructure> rewards = {},
      std::vector<std::string> labels = {});

  std::size_t num_states() const { return action_begin_.empty() ? 0 : action_begin_.size() - 1; }
  StateIndex initial_state() const { return initial_; }

  std::uint32_t num_actions(StateIndex s) const {
    return action_begin_[s + 1] - action_begin_[s];
  }
  /// Global action id of the a-th action of s.
  std::size_t action_id(StateIndex s, ActionIndex a) const { return action_begin_[s] + a; }
  std::size_t branch_begin(StateIndex s, ActionIndex a) const {
    return branch_begin_[action_id(s, a)];
  }
  std::span<const Branch> branches(StateIndex s, ActionIndex a) const {
    const std::size_t id = action_id(s, a);
    return {branches_.data() + branch_begin_[id], branch_begin_[id + 1] - branch_begin_[id]};
  }
  const std::string& action_name(StateIndex s, ActionIndex a) const {
    return action_names_[action_id(s, a)];
  }

  std::size_t num_total_actions() const { return action_names_.size(); }
  std::size_t num_total_branches() const { return branches_.size(); }

  const std::vector<std::string>& state_labels() const { return labels_; }
  /// Label of s, or its index rendered as text when unlabelled.
  std::string state_name(StateIndex s) const;
  std::optional<StateIndex> find_state(std::string_view label) const;

  const std::vector<RewardStructure>& reward_structures() const { return rewards_; }
  /// Index into reward_structures(), if a structure with that name exists.
  std::optional<std::size_t> find_reward(std::string_view name) const;
  /// Dense reward per global branch index for reward structure r.
  std::span<const double> branch_rewards(std::size_t r) const { return dense_rewards_[r]; }

  /// Actions of s as specs, in canonical order.
  std::vector<ActionSpec> actions_of(StateIndex s) const;

  bool operator==(const Mdp& other) const;

 private:
  StateIndex initial_ = 0;
  std::vector<std::uint32_t> action_begin_;
  std::vector<std::size_t> branch_begin_;
  std::vector<Branch> branches_;
  std::vector<std::string> action_names_;
  std::vector<std::string> labels_;
  std::vector<RewardStructure> rewards_;
  std::vector<std::vector<double>> dense_rewards_;
};

/// Incremental construction helper for Mdp.
class MdpBuilder {
 public:
  StateIndex add_state(std::string label = {});
  void add_states(std::size_t count);
  ActionIndex add_action(StateIndex s, std::string name, std::vector<Branch> branches);
  void add_reward(std::string_view structure, StateIndex s, ActionIndex a, StateIndex target,
                  double value);
  /// Ensures a (possibly empty) reward structure with this name exists.
  void declare_reward(std::string_view structure);
  void set_initial(StateIndex s) { initial_ = s; }
  std::size_t num_states() const { return actions_.size(); }

  Mdp build() const;

 private:
  RewardStructure& structure(std::string_view name);

  StateIndex initial_ = 0;
  std::vector<std::vector<ActionSpec>> actions_;
  std::vector<std::string> labels_;
  std::vector<RewardStructure> rewards_;
};

enum class ObjectiveKind { ProbReach, ExpReward };
enum class Direction { Max, Min };

/// Known range of a single run's value; needed for Hoeffding intervals and
/// for fixed-precision run counts of expected-reward objectives.
struct ValueBounds {
  double lo = 0.0;
  double hi = 1.0;

  bool operator==(const ValueBounds&) const = default;
};

struct Objective {
  ObjectiveKind kind = ObjectiveKind::ProbReach;
  Direction direction = Direction::Max;
  std::vector<StateIndex> goal;
  std::string reward;  // ExpReward only
  std::optional<ValueBounds> bounds;
  std::string label;

  bool operator==(const Objective&) const = default;
};

struct MultiQuery {
  std::string name;
  std::vector<Objective> objectives;

  std::size_t dimension() const { return objectives.size(); }
  std::vector<Direction> directions() const;

  bool operator==(const MultiQuery&) const = default;
};

enum class Severity { Error, Warning };

enum class IssueKind {
  EmptyModel,
  InvalidInitial,
  Deadlock,
  InvalidTarget,
  NonPositiveProbability,
  ProbabilitySum,
  InvalidRewardEntry,
  EmptyQuery,
  EmptyGoal,
  InvalidGoalState,
  UnresolvedReward,
  InvalidBounds,
  GoalUnreachable,
};

struct ValidationIssue {
  IssueKind kind;
  Severity severity;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return error_count() == 0; }
  std::size_t error_count() const;
  std::size_t warning_count() const { return issues.size() - error_count(); }
  bool has(IssueKind kind) const;
  std::string summary() const;
};

/// Tolerance on per-action probability sums.
inline constexpr double kProbabilitySumTolerance = 1e-9;

ValidationReport validate_mdp(const Mdp& model);
/// Also checks the query against the model, and warns about reachable states
/// from which an expected-reward goal cannot be reached under any strategy.
ValidationReport validate_mdp(const Mdp& model, const MultiQuery& query);

/// Per-state action choice of a deterministic memoryless strategy.
using StrategyMap = std::vector<ActionIndex>;

/// Markov chain induced by fixing one action per state.
struct Dtmc {
  StateIndex initial = 0;
  std::vector<std::vector<Branch>> transitions;
  /// rewards[r][s][b]: reward of branch b of state s under structure r.
  std::vector<std::vector<std::vector<double>>> rewards;

  std::size_t num_states() const { return transitions.size(); }
};

Dtmc induce_dtmc(const Mdp& model, std::span<const ActionIndex> choice);

/// States reachable from the initial state (under any strategy).
std::vector<bool> reachable_states(const Mdp& model);
/// States from which some goal state is reachable under some strategy.
std::vector<bool> can_reach(const Mdp& model, std::span<const StateIndex> goal);

}  // namespace mosmc
