#include <doctest.h>

#include "mosmc/errors.hpp"
#include "mosmc/generators.hpp"
#include "mosmc/mdp.hpp"

using namespace mosmc;

namespace {

Mdp two_state(double p_stay, double p_leave) {
  MdpBuilder b;
  const StateIndex s0 = b.add_state("a");
  const StateIndex s1 = b.add_state("b");
  b.add_action(s0, "go", {{s0, p_stay}, {s1, p_leave}});
  b.add_action(s1, "tau", {{s1, 1.0}});
  return b.build();
}

}  // namespace

TEST_SUITE("mdp") {

TEST_CASE("builder lays out actions and branches contiguously") {
  const ModelFile f = model_mr();
  const Mdp& m = f.model;
  CHECK(m.num_states() == 3);
  CHECK(m.num_actions(0) == 2);
  CHECK(m.num_actions(1) == 2);
  CHECK(m.num_actions(2) == 1);
  CHECK(m.action_name(1, 0) == "subm");
  CHECK(m.num_total_actions() == 5);
  CHECK(m.num_total_branches() == 7);
  CHECK(m.branch_begin(0, 1) == 2);
  CHECK(m.find_state("paper") == StateIndex{1});
  CHECK(!m.find_state("nowhere"));
  const auto eff = m.find_reward("eff");
  REQUIRE(eff);
  CHECK(m.branch_rewards(*eff)[m.branch_begin(1, 0) + 1] == 24.0);
}

TEST_CASE("valid models pass validation") {
  const ModelFile f = model_mr();
  CHECK(validate_mdp(f.model).ok());
  CHECK(validate_mdp(f.model, f.queries[0]).ok());
  CHECK(validate_mdp(two_state(0.5, 0.5)).ok());
}

TEST_CASE("probability defects are reported") {
  CHECK(validate_mdp(two_state(0.5, 0.4)).has(IssueKind::ProbabilitySum));
  CHECK(validate_mdp(two_state(-0.5, 1.5)).has(IssueKind::NonPositiveProbability));
  CHECK(validate_mdp(two_state(0.5, 0.5 + 1e-12)).ok());
}

TEST_CASE("deadlocks and bad targets are reported") {
  MdpBuilder b;
  b.add_state();
  b.add_state();
  b.add_action(0, "go", {{5, 1.0}});
  const auto r = validate_mdp(b.build());
  CHECK(r.has(IssueKind::Deadlock));
  CHECK(r.has(IssueKind::InvalidTarget));
  CHECK(!r.ok());
  CHECK(validate_mdp(Mdp{}).has(IssueKind::EmptyModel));
}

TEST_CASE("query issues are reported") {
  const ModelFile f = model_mr();
  MultiQuery q = f.queries[0];
  q.objectives[0].reward = "missing";
  CHECK(validate_mdp(f.model, q).has(IssueKind::UnresolvedReward));
  q = f.queries[0];
  q.objectives[1].goal = {};
  CHECK(validate_mdp(f.model, q).has(IssueKind::EmptyGoal));
  q = f.queries[0];
  q.objectives[0].bounds = ValueBounds{3.0, 1.0};
  CHECK(validate_mdp(f.model, q).has(IssueKind::InvalidBounds));
  CHECK(validate_mdp(f.model, MultiQuery{}).has(IssueKind::EmptyQuery));
}

TEST_CASE("unreachable expected-reward goal is a warning") {
  MdpBuilder b;
  b.add_state();
  b.add_state();
  b.add_state();
  b.add_action(0, "left", {{1, 1.0}});
  b.add_action(0, "right", {{2, 1.0}});
  b.add_action(1, "tau", {{1, 1.0}});
  b.add_action(2, "tau", {{2, 1.0}});
  b.declare_reward("r");
  MultiQuery q{"q", {{ObjectiveKind::ExpReward, Direction::Min, {2}, "r", std::nullopt, "r"}}};
  const auto r = validate_mdp(b.build(), q);
  CHECK(r.has(IssueKind::GoalUnreachable));
  CHECK(r.ok());
  CHECK(r.warning_count() == 1);
}

TEST_CASE("induced chain keeps the chosen action's branches and rewards") {
  const ModelFile f = model_mr();
  const StrategyMap choice{0, 1, 0};
  const Dtmc c = induce_dtmc(f.model, choice);
  CHECK(c.num_states() == 3);
  CHECK(c.transitions[0].size() == 2);
  CHECK(c.transitions[1].size() == 1);
  CHECK(c.transitions[1][0].target == 2);
  const std::size_t rec = *f.model.find_reward("rec");
  CHECK(c.rewards[rec][1][0] == 1.0);
  CHECK_THROWS_AS(induce_dtmc(f.model, StrategyMap{0, 2, 0}), ConfigError);
}

TEST_CASE("reachability helpers") {
  const ModelFile f = model_mr();
  const auto reach = reachable_states(f.model);
  CHECK((reach[0] && reach[1] && reach[2]));
  const StateIndex goal[] = {1};
  const auto can = can_reach(f.model, goal);
  CHECK(can[0]);
  CHECK(can[1]);
  CHECK(!can[2]);
}

}
