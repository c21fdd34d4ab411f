#include "mosmc/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "mosmc/errors.hpp"

namespace mosmc {

Mdp::Mdp(std::size_t num_states, StateIndex initial, std::vector<std::vector<ActionSpec>> actions,
         std::vector<RewardStructure> rewards, std::vector<std::string> labels)
    : initial_(initial), labels_(std::move(labels)), rewards_(std::move(rewards)) {
  actions.resize(num_states);
  action_begin_.reserve(num_states + 1);
  action_begin_.push_back(0);
  branch_begin_.push_back(0);
  for (auto& state_actions : actions) {
    for (auto& action : state_actions) {
      action_names_.push_back(std::move(action.name));
      branches_.insert(branches_.end(), action.branches.begin(), action.branches.end());
      branch_begin_.push_back(branches_.size());
    }
    action_begin_.push_back(static_cast<std::uint32_t>(action_names_.size()));
  }

  // Entries that reference invalid triples are kept (validation reports
  // them) but contribute nothing to the dense tables.
  dense_rewards_.resize(rewards_.size());
  for (std::size_t r = 0; r < rewards_.size(); ++r) {
    auto& dense = dense_rewards_[r];
    dense.assign(branches_.size(), 0.0);
    for (const RewardEntry& e : rewards_[r].entries) {
      if (e.state >= this->num_states() || e.action >= num_actions(e.state)) continue;
      const std::size_t begin = branch_begin(e.state, e.action);
      const auto bs = branches(e.state, e.action);
      for (std::size_t b = 0; b < bs.size(); ++b) {
        if (bs[b].target == e.target) dense[begin + b] = e.value;
      }
    }
  }
}

std::string Mdp::state_name(StateIndex s) const {
  if (s < labels_.size() && !labels_[s].empty()) return labels_[s];
  return std::to_string(s);
}

std::optional<StateIndex> Mdp::find_state(std::string_view label) const {
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    if (labels_[s] == label) return static_cast<StateIndex>(s);
  }
  return std::nullopt;
}

std::optional<std::size_t> Mdp::find_reward(std::string_view name) const {
  for (std::size_t r = 0; r < rewards_.size(); ++r) {
    if (rewards_[r].name == name) return r;
  }
  return std::nullopt;
}

std::vector<ActionSpec> Mdp::actions_of(StateIndex s) const {
  std::vector<ActionSpec> out;
  for (ActionIndex a = 0; a < num_actions(s); ++a) {
    const auto bs = branches(s, a);
    out.push_back({action_name(s, a), {bs.begin(), bs.end()}});
  }
  return out;
}

bool Mdp::operator==(const Mdp& other) const {
  return initial_ == other.initial_ && action_begin_ == other.action_begin_ &&
         branch_begin_ == other.branch_begin_ && branches_ == other.branches_ &&
         action_names_ == other.action_names_ && labels_ == other.labels_ &&
         rewards_ == other.rewards_;
}

StateIndex MdpBuilder::add_state(std::string label) {
  actions_.emplace_back();
  labels_.push_back(std::move(label));
  return static_cast<StateIndex>(actions_.size() - 1);
}

void MdpBuilder::add_states(std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) add_state();
}

ActionIndex MdpBuilder::add_action(StateIndex s, std::string name, std::vector<Branch> branches) {
  if (s >= actions_.size()) throw ModelError("add_action: state " + std::to_string(s) + " does not exist");
  actions_[s].push_back({std::move(name), std::move(branches)});
  return static_cast<ActionIndex>(actions_[s].size() - 1);
}

RewardStructure& MdpBuilder::structure(std::string_view name) {
  for (auto& r : rewards_) {
    if (r.name == name) return r;
  }
  rewards_.push_back({std::string(name), {}});
  return rewards_.back();
}

void MdpBuilder::declare_reward(std::string_view name) { structure(name); }

void MdpBuilder::add_reward(std::string_view name, StateIndex s, ActionIndex a, StateIndex target,
                            double value) {
  auto& entries = structure(name).entries;
  for (auto& e : entries) {
    if (e.state == s && e.action == a && e.target == target) {
      e.value = value;
      return;
    }
  }
  entries.push_back({s, a, target, value});
}

Mdp MdpBuilder::build() const {
  const bool any_label = std::any_of(labels_.begin(), labels_.end(),
                                     [](const std::string& l) { return !l.empty(); });
  return Mdp(actions_.size(), initial_, actions_, rewards_,
             any_label ? labels_ : std::vector<std::string>{});
}

std::vector<Direction> MultiQuery::directions() const {
  std::vector<Direction> dirs;
  dirs.reserve(objectives.size());
  for (const auto& o : objectives) dirs.push_back(o.direction);
  return dirs;
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const auto& i) {
    return i.severity == Severity::Error;
  }));
}

bool ValidationReport::has(IssueKind kind) const {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& i : issues) {
    out << (i.severity == Severity::Error ? "error: " : "warning: ") << i.message << '\n';
  }
  return out.str();
}

namespace {

void add_issue(ValidationReport& report, IssueKind kind, Severity severity, std::string message) {
  report.issues.push_back({kind, severity, std::move(message)});
}

}  // namespace

ValidationReport validate_mdp(const Mdp& model) {
  ValidationReport report;
  const std::size_t n = model.num_states();
  if (n == 0) {
    add_issue(report, IssueKind::EmptyModel, Severity::Error, "model has no states");
    return report;
  }
  if (model.initial_state() >= n) {
    add_issue(report, IssueKind::InvalidInitial, Severity::Error,
              "initial state " + std::to_string(model.initial_state()) + " out of range");
  }
  for (StateIndex s = 0; s < n; ++s) {
    if (model.num_actions(s) == 0) {
      add_issue(report, IssueKind::Deadlock, Severity::Error,
                "state " + model.state_name(s) + " has no enabled action");
    }
    for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
      const std::string where =
          "state " + model.state_name(s) + " action '" + model.action_name(s, a) + "'";
      double sum = 0.0;
      const auto bs = model.branches(s, a);
      for (std::size_t b = 0; b < bs.size(); ++b) {
        if (bs[b].target >= n) {
          add_issue(report, IssueKind::InvalidTarget, Severity::Error,
                    where + " branch " + std::to_string(b) + " targets unknown state " +
                        std::to_string(bs[b].target));
        }
        if (!(bs[b].probability > 0.0) || bs[b].probability > 1.0) {
          add_issue(report, IssueKind::NonPositiveProbability, Severity::Error,
                    where + " branch " + std::to_string(b) + " has probability outside (0,1]");
        }
        sum += bs[b].probability;
      }
      if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
        std::ostringstream msg;
        msg << where << " branch probabilities sum to " << sum;
        add_issue(report, IssueKind::ProbabilitySum, Severity::Error, msg.str());
      }
    }
  }
  for (const auto& r : model.reward_structures()) {
    for (const auto& e : r.entries) {
      bool valid = e.state < n && e.action < model.num_actions(e.state);
      if (valid) {
        const auto bs = model.branches(e.state, e.action);
        valid = std::any_of(bs.begin(), bs.end(), [&](const Branch& b) { return b.target == e.target; });
      }
      if (!valid) {
        add_issue(report, IssueKind::InvalidRewardEntry, Severity::Error,
                  "reward '" + r.name + "' references missing transition (" +
                      std::to_string(e.state) + ", " + std::to_string(e.action) + ", " +
                      std::to_string(e.target) + ")");
      }
    }
  }
  return report;
}

ValidationReport validate_mdp(const Mdp& model, const MultiQuery& query) {
  ValidationReport report = validate_mdp(model);
  if (query.objectives.empty()) {
    add_issue(report, IssueKind::EmptyQuery, Severity::Error, "query has no objectives");
  }
  const std::size_t n = model.num_states();
  const bool structure_ok = report.ok();
  const std::vector<bool> reachable = structure_ok ? reachable_states(model) : std::vector<bool>{};

  for (std::size_t i = 0; i < query.objectives.size(); ++i) {
    const Objective& o = query.objectives[i];
    const std::string name = "objective " + std::to_string(i + 1);
    bool goal_ok = !o.goal.empty();
    if (o.goal.empty()) {
      add_issue(report, IssueKind::EmptyGoal, Severity::Error, name + " has an empty goal set");
    }
    for (StateIndex g : o.goal) {
      if (g >= n) {
        goal_ok = false;
        add_issue(report, IssueKind::InvalidGoalState, Severity::Error,
                  name + " goal references unknown state " + std::to_string(g));
      }
    }
    if (o.kind == ObjectiveKind::ExpReward && !model.find_reward(o.reward)) {
      add_issue(report, IssueKind::UnresolvedReward, Severity::Error,
                name + " references unknown reward structure '" + o.reward + "'");
    }
    if (o.bounds && !(o.bounds->lo <= o.bounds->hi)) {
      add_issue(report, IssueKind::InvalidBounds, Severity::Error, name + " has bounds lo > hi");
    }
    if (o.kind == ObjectiveKind::ExpReward && goal_ok && structure_ok) {
      const std::vector<bool> to_goal = can_reach(model, o.goal);
      std::size_t bad = 0;
      StateIndex first = 0;
      for (StateIndex s = 0; s < n; ++s) {
        if (reachable[s] && !to_goal[s]) {
          if (bad++ == 0) first = s;
        }
      }
      if (bad > 0) {
        add_issue(report, IssueKind::GoalUnreachable, Severity::Warning,
                  name + ": goal unreachable from " + std::to_string(bad) +
                      " reachable state(s), e.g. " + model.state_name(first) +
                      "; expected reward may be infinite");
      }
    }
  }
  return report;
}

Dtmc induce_dtmc(const Mdp& model, std::span<const ActionIndex> choice) {
  const std::size_t n = model.num_states();
  if (choice.size() != n) {
    throw ConfigError("strategy map has " + std::to_string(choice.size()) + " entries, model has " +
                      std::to_string(n) + " states");
  }
  Dtmc chain;
  chain.initial = model.initial_state();
  chain.transitions.resize(n);
  chain.rewards.assign(model.reward_structures().size(), std::vector<std::vector<double>>(n));
  for (StateIndex s = 0; s < n; ++s) {
    if (choice[s] >= model.num_actions(s)) {
      throw ConfigError("invalid action index " + std::to_string(choice[s]) + " for state " +
                        model.state_name(s));
    }
    const auto bs = model.branches(s, choice[s]);
    chain.transitions[s].assign(bs.begin(), bs.end());
    const std::size_t begin = model.branch_begin(s, choice[s]);
    for (std::size_t r = 0; r < chain.rewards.size(); ++r) {
      const auto dense = model.branch_rewards(r);
      chain.rewards[r][s].assign(dense.begin() + static_cast<std::ptrdiff_t>(begin),
                                 dense.begin() + static_cast<std::ptrdiff_t>(begin + bs.size()));
    }
  }
  return chain;
}

std::vector<bool> reachable_states(const Mdp& model) {
  std::vector<bool> seen(model.num_states(), false);
  std::deque<StateIndex> queue{model.initial_state()};
  seen[model.initial_state()] = true;
  while (!queue.empty()) {
    const StateIndex s = queue.front();
    queue.pop_front();
    for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
      for (const Branch& b : model.branches(s, a)) {
        if (b.target < seen.size() && !seen[b.target]) {
          seen[b.target] = true;
          queue.push_back(b.target);
        }
      }
    }
  }
  return seen;
}

std::vector<bool> can_reach(const Mdp& model, std::span<const StateIndex> goal) {
  const std::size_t n = model.num_states();
  std::vector<std::vector<StateIndex>> predecessors(n);
  for (StateIndex s = 0; s < n; ++s) {
    for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
      for (const Branch& b : model.branches(s, a)) {
        if (b.target < n) predecessors[b.target].push_back(s);
      }
    }
  }
  std::vector<bool> result(n, false);
  std::deque<StateIndex> queue;
  for (StateIndex g : goal) {
    if (g < n && !result[g]) {
      result[g] = true;
      queue.push_back(g);
    }
  }
  while (!queue.empty()) {
    const StateIndex s = queue.front();
    queue.pop_front();
    for (StateIndex p : predecessors[s]) {
      if (!result[p]) {
        result[p] = true;
        queue.push_back(p);
      }
    }
  }
  return result;
}

}  // namespace mosmc
