#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mosmc/errors.hpp"
#include "mosmc/experiment.hpp"
#include "mosmc/generators.hpp"
#include "mosmc/oracle.hpp"

using namespace mosmc;

namespace {

ExperimentConfig config(Algorithm a) {
  ExperimentConfig c;
  c.algorithm = a;
  c.m = 20;
  c.n = 100;
  c.iterations = 3;
  c.strategy_seed = 3;
  c.simulation_seed = 4;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("reference point comes from bounds, then observations, then config") {
  const ModelFile exp = gen_exponential(4);
  ExperimentConfig c = config(Algorithm::FSB);
  const ExperimentResult a = run_experiment(c, exp.model, exp.queries[0]);
  CHECK(a.reference_source == "bounds");
  CHECK(a.reference == std::vector<double>{1.0, -1.25});
  CHECK(a.hv_under > 0.0);
  CHECK(!a.hv_over);

  const ModelFile mr = model_mr();
  const ExperimentResult b = run_experiment(c, mr.model, mr.queries[0]);
  CHECK(b.reference_source == "observed");
  CHECK(b.reference[0] == 0.0);
  CHECK(b.reference[1] > 0.0);
  for (const auto& corner : b.report.under.corners) CHECK(corner.point[1] <= b.reference[1]);

  c.reference = std::vector<double>{0.0, 500.0};
  const ExperimentResult r = run_experiment(c, mr.model, mr.queries[0]);
  CHECK(r.reference_source == "config");
  CHECK(r.reference == std::vector<double>{0.0, 500.0});
  c.reference = std::vector<double>{0.0};
  CHECK_THROWS_AS(run_experiment(c, mr.model, mr.queries[0]), ConfigError);
}

TEST_CASE("incremental experiments score both fronts") {
  const ModelFile exp = gen_exponential(4);
  ExperimentConfig c = config(Algorithm::Incremental);
  c.epsilon = 0.1;
  c.max_batches = 2;
  const ExperimentResult r = run_experiment(c, exp.model, exp.queries[0]);
  REQUIRE(r.hv_over);
  CHECK(*r.hv_over >= r.hv_under);
}

TEST_CASE("only two objectives are supported") {
  ModelFile f = model_mr();
  MultiQuery q = f.queries[0];
  q.objectives.push_back(q.objectives[0]);
  CHECK_THROWS_AS(run_experiment(config(Algorithm::FSB), f.model, q), UnsupportedDimension);
}

TEST_CASE("mr model oracle hypervolume") {
  const ModelFile f = model_mr();
  const ExactFront e = exact_pareto_front(f.model, f.queries[0]);
  const double ref[] = {0.0, 120.0};
  const FrontApproximation fronts[] = {e.hull, e.hull};
  const std::string labels[] = {"a", "b"};
  const auto dirs = f.queries[0].directions();
  const HvTable t = hv_report(fronts, labels, ref, dirs);
  CHECK(t.values[0] == doctest::Approx(248.2).epsilon(1e-12));
  CHECK(t.mean == t.values[1]);
  CHECK_THROWS_AS(hv_report({}, {}, ref, dirs), ConfigError);
}

TEST_CASE("report bytes are identical at 1 and 8 workers") {
  const ModelFile f = gen_deep_sea(DeepSeaVariant::Probabilistic);
  for (Algorithm a : {Algorithm::FSB, Algorithm::WVR, Algorithm::Incremental}) {
    ExperimentConfig c = config(a);
    c.n = 700;
    c.epsilon = 0.2;
    c.max_batches = 2;
    c.workers = 1;
    const ExperimentResult one = run_experiment(c, f.model, f.queries[0]);
    c.workers = 8;
    const ExperimentResult eight = run_experiment(c, f.model, f.queries[0]);
    CHECK(report_json(one, f.queries[0], "m") == report_json(eight, f.queries[0], "m"));
  }
}

TEST_CASE("outputs on disk follow the documented schemas") {
  const ModelFile f = gen_exponential(4);
  const ExperimentResult r = run_experiment(config(Algorithm::WVR), f.model, f.queries[0]);
  const auto dir = std::filesystem::temp_directory_path() / "mosmc_experiment_test";
  std::filesystem::remove_all(dir);
  write_outputs(dir, r, f.queries[0], "exponential:depth=4");
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["schema"] == "mosmc-report");
  CHECK(report["model"] == "exponential:depth=4");
  CHECK(report["survivors_per_iteration"].size() == 3);
  CHECK(report["accounting"]["total_runs"] == r.report.accounting.total_runs());
  CHECK(report.contains("wall_seconds") == false);
  CHECK(slurp(dir / "fronts.csv").rfind("dim1,dim2,kind,strategy_id\n", 0) == 0);
  CHECK(slurp(dir / "iterations.csv").rfind("iteration,survivors,runs,w1,w2\n", 0) == 0);
  CHECK(slurp(dir / "trajectory.csv") == "batch,position,strategy_id,runs,cumulative_runs\n");
  CHECK(nlohmann::json::parse(slurp(dir / "timing.json")).contains("wall_seconds"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("transition accounting sums the per-strategy records") {
  const ModelFile f = gen_exponential(5);
  const ExperimentResult r = run_experiment(config(Algorithm::FIB), f.model, f.queries[0]);
  std::uint64_t t = 0;
  for (const auto* s : {&r.report.heuristic_stats, &r.report.evaluation_stats}) {
    for (const auto& [id, rec] : *s) t += rec.transitions;
  }
  CHECK(r.report.accounting.transitions == t);
  CHECK(t == 5 * r.report.accounting.total_runs());
}

}
