#include "mosmc/simulation.hpp"

namespace mosmc {

Simulator::Simulator(const Mdp& model, const MultiQuery& query, std::uint64_t step_limit)
    : model_(&model), query_(&query), step_limit_(step_limit) {
  if (step_limit == 0) throw ConfigError("step limit must be at least 1");
  if (query.objectives.empty() || query.objectives.size() > 64) {
    throw ConfigError("query must have between 1 and 64 objectives");
  }
  const ValidationReport report = validate_mdp(model, query);
  if (!report.ok()) throw ModelError("model failed validation:\n" + report.summary());

  const std::size_t n = model.num_states();
  for (const Objective& o : query.objectives) {
    CompiledObjective c;
    c.expected_reward = o.kind == ObjectiveKind::ExpReward;
    c.goal.assign(n, 0);
    for (StateIndex g : o.goal) c.goal[g] = 1;
    if (c.expected_reward) {
      c.rewards = model.branch_rewards(*model.find_reward(o.reward));
    } else {
      const std::vector<bool> viable = can_reach(model, o.goal);
      c.viable.assign(viable.begin(), viable.end());
    }
    objectives_.push_back(std::move(c));
  }
}

}  // namespace mosmc
