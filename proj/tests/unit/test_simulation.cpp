#include <doctest.h>

#include "mosmc/generators.hpp"
#include "mosmc/simulation.hpp"

using namespace mosmc;

namespace {

struct Fixed {
  StrategyMap map;
  ActionIndex operator()(StateIndex s, std::uint32_t) const { return map[s]; }
};

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("stop strategy on the mr model takes one step and earns nothing") {
  const ModelFile f = model_mr();
  const Simulator sim(f.model, f.queries[0]);
  const RunOutcome r = sim.run(Fixed{{1, 0, 0}}, 17);
  CHECK(r.steps == 1);
  CHECK(!r.truncated);
  CHECK(r.values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("archive strategy yields recognition 1 or 0 and effort 10") {
  const ModelFile f = model_mr();
  const Simulator sim(f.model, f.queries[0]);
  int published = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const RunOutcome r = sim.run(Fixed{{0, 1, 0}}, seed);
    CHECK(r.values[1] == 10.0);
    CHECK((r.values[0] == 0.0 || r.values[0] == 1.0));
    published += r.values[0] == 1.0;
  }
  CHECK(published / 2000.0 == doctest::Approx(0.85).epsilon(0.05));
}

TEST_CASE("runs are pure functions of strategy and seed") {
  const ModelFile f = gen_exponential(6);
  const Simulator sim(f.model, f.queries[0]);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RunTrace t1, t2;
    const RunOutcome a = sim.run(StrategyId{99}, seed, &t1);
    const RunOutcome b = sim.run(StrategyId{99}, seed, &t2);
    CHECK(a == b);
    CHECK(t1.states == t2.states);
    CHECK(t1.actions.size() == a.steps);
  }
}

TEST_CASE("exponential runs have depth steps and rewards inside the bounds") {
  const ModelFile f = gen_exponential(5);
  const Simulator sim(f.model, f.queries[0]);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const RunOutcome r = sim.run(StrategyId{static_cast<std::uint32_t>(seed * 31)}, seed);
    CHECK(r.steps == 5);
    CHECK(r.values[0] >= 1.0);
    CHECK(r.values[0] <= 2.0);
    CHECK(r.values[1] >= -1.25);
    CHECK(r.values[1] <= 0.75);
  }
}

TEST_CASE("step limit truncates and reports unresolved objectives") {
  const ModelFile f = model_mr();
  const Simulator sim(f.model, f.queries[0], 3);
  // write then submit forever: escapes within 3 steps with probability < 1.
  bool saw_truncation = false;
  for (std::uint64_t seed = 0; seed < 200 && !saw_truncation; ++seed) {
    const RunOutcome r = sim.run(Fixed{{0, 0, 0}}, seed);
    CHECK(r.steps <= 3);
    if (r.truncated) {
      saw_truncation = true;
      CHECK(r.steps == 3);
      CHECK(r.unresolved == 0b11);
    }
  }
  CHECK(saw_truncation);
}

TEST_CASE("reachability resolves to 0 once the goal is unreachable") {
  MdpBuilder b;
  b.add_states(3);
  b.add_action(0, "go", {{1, 0.5}, {2, 0.5}});
  b.add_action(1, "tau", {{1, 1.0}});
  b.add_action(2, "tau", {{2, 1.0}});
  const Mdp m = b.build();
  const MultiQuery q{"q", {{ObjectiveKind::ProbReach, Direction::Max, {1}, "", std::nullopt, "p"}}};
  const Simulator sim(m, q, 5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RunOutcome r = sim.run(StrategyId{0}, seed);
    CHECK(r.steps == 1);
    CHECK(!r.truncated);
  }
}

TEST_CASE("initial goal state resolves without a step") {
  const ModelFile f = model_mr();
  MultiQuery q = f.queries[0];
  q.objectives[0].goal = {0};
  q.objectives[1].goal = {0};
  const Simulator sim(f.model, q);
  CHECK(sim.run(StrategyId{1}, 0).steps == 0);
}

TEST_CASE("out-of-range chooser is rejected") {
  const ModelFile f = model_mr();
  const Simulator sim(f.model, f.queries[0]);
  CHECK_THROWS_AS(sim.run([](StateIndex, std::uint32_t k) { return k; }, 0), ConfigError);
}

}
