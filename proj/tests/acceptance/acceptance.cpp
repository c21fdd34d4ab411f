// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mosmc/algorithms.hpp"
#include "mosmc/experiment.hpp"
#include "mosmc/generators.hpp"
#include "mosmc/heuristics.hpp"
#include "mosmc/oracle.hpp"
#include "mosmc/statistics.hpp"
#include "oracles.hpp"

using namespace mosmc;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, double limit_seconds, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_seconds) {
    v.pass = false;
    v.detail += "; runtime limit exceeded";
  }
  if (!v.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.2fs, limit %.0fs]\n", v.pass ? "PASS" : "FAIL", id, title,
              v.detail.c_str(), secs, limit_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict oracle_fixture() {
  const ModelFile f = model_mr();
  const ExactFront e = exact_pareto_front(f.model, f.queries[0], {OracleMethod::Enumerate});
  const double want[3][2] = {{0, 0}, {0.85, 10}, {3.4, 112}};
  if (e.hull.size() != 3) return {false, fmt("%zu corners instead of 3", e.hull.size())};
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(e.hull.corners[i].point[k] - want[i][k]));
  }
  return {worst < 1e-9, fmt("front {(0,0),(0.85,10),(3.4,112)}, max deviation %.2e", worst)};
}

Verdict coverage() {
  const ModelFile f = model_mr();
  const MultiQuery& q = f.queries[0];
  const auto dirs = q.directions();
  const ExactFront truth = exact_pareto_front(f.model, q, {OracleMethod::Enumerate});
  std::string detail;
  bool ok = true;
  for (Algorithm a : {Algorithm::FSB, Algorithm::FIB, Algorithm::WVR, Algorithm::Eval}) {
    int inside = 0;
    for (std::uint64_t rep = 1; rep <= 200; ++rep) {
      ExperimentConfig c;
      c.algorithm = a;
      c.alpha = 0.1;
      c.m = 20;
      c.n = 50;
      c.iterations = 3;
      c.strategy_seed = rep;
      c.simulation_seed = 1000 + rep;
      const ExperimentReport r = run_algorithm(c, f.model, q);
      inside += is_inside(r.under, truth.hull, dirs);
    }
    ok = ok && inside >= 170;
    detail += fmt("%s %d/200 ", to_string(a).c_str(), inside);
  }
  detail += "inside the oracle set (need >= 170)";
  return {ok, detail};
}

std::set<std::uint32_t> excluded(Rule rule, const StrategyStats& stats, std::span<const Direction> dirs) {
  const auto keep = select_candidates(rule, stats, dirs);
  std::set<std::uint32_t> out;
  for (const auto& [id, r] : stats) {
    if (!std::binary_search(keep.begin(), keep.end(), id)) out.insert(id.value);
  }
  return out;
}

bool subset(const std::set<std::uint32_t>& a, const std::set<std::uint32_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Verdict lattice() {
  const Direction dirs[] = {Direction::Max, Direction::Min};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> mean(0.0, 1.0), hw(0.0, 0.25);
  int set_violations = 0, pair_violations = 0, strict_ffeo = 0;
  for (int t = 0; t < 1000; ++t) {
    StrategyStats stats;
    for (std::uint32_t i = 0; i < 10; ++i) {
      StrategyRecord r;
      r.id = StrategyId{i};
      for (int k = 0; k < 2; ++k) {
        const double m = mean(rng), h = hw(rng);
        r.box.dims.push_back({m, m - h, m + h});
      }
      stats[r.id] = r;
    }
    const auto simple = excluded(Rule::Simple, stats, dirs), fe = excluded(Rule::FE, stats, dirs);
    const auto ffe = excluded(Rule::FFE, stats, dirs), ffw = excluded(Rule::FFW, stats, dirs);
    const auto ffeo = excluded(Rule::FFEO, stats, dirs), cf = excluded(Rule::CF, stats, dirs);
    std::set<std::uint32_t> both;
    std::set_intersection(ffe.begin(), ffe.end(), ffw.begin(), ffw.end(), std::inserter(both, both.end()));
    const bool chain = subset(cf, ffeo) && subset(ffeo, both) && subset(ffe, fe) && subset(ffw, fe) &&
                       subset(fe, simple);
    set_violations += !chain;
    strict_ffeo += ffeo != both;
    for (const auto& [ci, c] : stats) {
      for (const auto& [wi, w] : stats) {
        if (ci == wi) continue;
        const bool e_ffe = excludes(Rule::FFE, c, w, dirs), e_ffw = excludes(Rule::FFW, c, w, dirs);
        const bool e_ffeo = excludes(Rule::FFEO, c, w, dirs), e_fe = excludes(Rule::FE, c, w, dirs);
        const bool ok = e_ffeo == (e_ffe && e_ffw) && (!excludes(Rule::CF, c, w, dirs) || e_ffeo) &&
                        (!(e_ffe || e_ffw) || e_fe) && (!e_fe || excludes(Rule::Simple, c, w, dirs));
        pair_violations += !ok;
      }
    }
  }
  return {set_violations == 0 && pair_violations == 0,
          fmt("1000 maps, %d set-inclusion and %d pairwise violations; FFEO = FFE and FFW exact per "
              "candidate-witness pair, per set the inclusion is strict in %d maps (different witnesses)",
              set_violations, pair_violations, strict_ffeo)};
}

// Strategies completed within `runs` total runs.
std::size_t completed_within(const ExperimentReport& r, std::uint64_t runs) {
  return static_cast<std::size_t>(std::count_if(r.trajectory.begin(), r.trajectory.end(),
                                                [&](const TrajectoryPoint& p) { return p.cumulative_runs <= runs; }));
}

Verdict fast_start() {
  const ModelFile f = gen_exponential(6);
  const MultiQuery& q = f.query("reach");
  auto run = [&](double factor, std::uint64_t m) {
    ExperimentConfig c;
    c.algorithm = Algorithm::Incremental;
    c.epsilon = 0.05;
    c.alpha = 0.1;
    c.batch_factor = factor;
    c.m = m;
    c.max_runs = 1'000'000;
    return inc_samp(c, f.model, q);
  };
  const ExperimentReport fast = run(0.5, 20), slow = run(0.1, 200);
  const std::size_t fast_early = completed_within(fast, 100'000), slow_early = completed_within(slow, 100'000);
  const std::size_t fast_end = fast.trajectory.size(), slow_end = slow.trajectory.size();
  return {fast_early > slow_early && fast_end < slow_end,
          fmt("completed strategies (f=0.5,m=20) vs (f=0.1,m=200): %zu vs %zu after 1e5 runs, %zu vs %zu after 1e6",
              fast_early, slow_early, fast_end, slow_end)};
}

Verdict survivor_shapes() {
  const ModelFile f = gen_deep_sea(DeepSeaVariant::Deterministic);
  auto series = [&](Algorithm a, std::size_t* candidates) {
    ExperimentConfig c;
    c.algorithm = a;
    c.m = 100;
    c.n = 100;
    c.iterations = 5;
    const ExperimentReport r = run_algorithm(c, f.model, f.queries[0]);
    std::vector<std::uint64_t> s;
    for (const auto& it : r.iterations) s.push_back(it.survivors);
    if (candidates) *candidates = r.candidates.size();
    return s;
  };
  std::size_t wvr_final = 0;
  const auto fibs = series(Algorithm::FIB, nullptr), fsbs = series(Algorithm::FSB, nullptr);
  const auto wvrs = series(Algorithm::WVR, &wvr_final);
  const bool fib_ok = std::is_sorted(fibs.rbegin(), fibs.rend()) && fibs.back() < fibs.front();
  const bool fsb_ok = fsbs[1] > fibs[1];
  const bool wvr_ok = std::all_of(wvrs.begin(), wvrs.end(), [&](auto v) { return v == wvrs[0]; }) &&
                      wvr_final < wvrs.back();
  auto text = [](const std::vector<std::uint64_t>& v) {
    std::ostringstream o;
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
    return o.str();
  };
  return {fib_ok && fsb_ok && wvr_ok,
          fmt("survivors FIB [%s] FSB [%s] WVR [%s] -> %zu candidates", text(fibs).c_str(), text(fsbs).c_str(),
              text(wvrs).c_str(), wvr_final)};
}

Verdict convergence() {
  const ModelFile f = gen_deep_sea(DeepSeaVariant::Deterministic, DeepSeaGrid::small());
  const MultiQuery& q = f.queries[0];
  const ExactFront truth = exact_pareto_front(f.model, q);
  const std::uint64_t b1 = 250'000, b2 = 4 * b1;
  double sum_ratio = 0.0;
  bool monotone = true;
  double ref_hv = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto hv_at = [&](std::uint64_t budget, double* oracle_hv) {
      ExperimentConfig c;
      c.algorithm = Algorithm::Incremental;
      c.epsilon = 0.05;
      c.batch_factor = 0.1;
      c.m = 20;
      c.max_runs = budget;
      c.strategy_seed = seed;
      c.simulation_seed = seed;
      const ExperimentResult r = run_experiment(c, f.model, q);
      if (oracle_hv) *oracle_hv = hypervolume(truth.hull, r.reference, q.directions());
      return r.hv_under;
    };
    const double h1 = hv_at(b1, nullptr);
    const double h2 = hv_at(b2, &ref_hv);
    monotone = monotone && h2 >= h1;
    sum_ratio += h2 / ref_hv;
  }
  const double ratio = sum_ratio / 3.0;
  return {monotone && ratio >= 0.9,
          fmt("HV monotone from 2.5e5 to 1e6 runs: %s; mean HV at 1e6 runs is %.1f%% of the oracle's %.3f "
              "(epsilon 0.05, need >= 90%%)",
              monotone ? "yes" : "no", 100.0 * ratio, ref_hv)};
}

Verdict determinism() {
  const ModelFile exp = gen_exponential(6);
  const ModelFile sea = gen_deep_sea(DeepSeaVariant::Probabilistic);
  int compared = 0, identical = 0;
  for (Algorithm a : {Algorithm::FSB, Algorithm::FIB, Algorithm::WVR, Algorithm::Eval, Algorithm::Incremental}) {
    for (const ModelFile* f : {&exp, &sea}) {
      ExperimentConfig c;
      c.algorithm = a;
      c.m = 20;
      c.n = 1000;
      c.iterations = 3;
      c.epsilon = 0.5;
      c.max_batches = 2;
      c.strategy_seed = 7;
      c.simulation_seed = 8;
      std::string first;
      for (std::size_t workers : {1, 8, 1}) {
        c.workers = workers;
        const std::string doc = report_json(run_experiment(c, f->model, f->queries[0]), f->queries[0], "m");
        if (first.empty()) {
          first = doc;
          continue;
        }
        ++compared;
        identical += doc == first;
      }
    }
  }
  return {identical == compared, fmt("%d/%d report.json documents byte-identical across reruns and 1 vs 8 workers",
                                     identical, compared)};
}

Verdict statistics_oracles() {
  double worst_cp = 0.0;
  int cases = 0;
  for (std::uint64_t n : {5, 20, 60, 150, 400}) {
    for (double alpha : {0.1, 0.01}) {
      for (double frac : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        const auto x = static_cast<std::uint64_t>(std::llround(frac * static_cast<double>(n)));
        const Interval ci = clopper_pearson(x, n, alpha);
        const auto [lo, hi] = oracle::clopper_pearson(x, n, alpha);
        worst_cp = std::max({worst_cp, std::abs(ci.lower - lo), std::abs(ci.upper - hi)});
        ++cases;
      }
    }
  }
  const Direction dirs[] = {Direction::Max, Direction::Max};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_hv = 0.0;
  for (int t = 0; t < 5; ++t) {
    std::vector<FrontCorner> pts;
    for (std::uint32_t i = 0; i < 15; ++i) {
      const double x = u(rng);
      pts.push_back({{x, std::sqrt(1.0 - x * x) * (0.8 + 0.2 * u(rng))}, StrategyId{i}});
    }
    const FrontApproximation front = convex_front(pts, dirs, FrontKind::Under);
    const double ref[] = {-0.1, -0.2};
    const double hv = hypervolume(front, ref, dirs);
    std::vector<std::pair<double, double>> chain;
    for (const auto& c : front.corners) chain.push_back({c.point[0], c.point[1]});
    const double mc = oracle::monte_carlo_hypervolume(chain, {-0.1, -0.2}, 1'000'000, 500 + t);
    worst_hv = std::max(worst_hv, std::abs(hv - mc) / hv);
  }
  return {cases == 50 && worst_cp < 1e-9 && worst_hv < 0.01,
          fmt("Clopper-Pearson %d cases, max |delta| %.2e (need < 1e-9); hypervolume vs 1e6-point Monte Carlo on 5 "
              "fronts, max relative error %.3f%% (need < 1%%)",
              cases, worst_cp, 100.0 * worst_hv)};
}

}  // namespace

int main() {
  report(1, "oracle fixture", 1, oracle_fixture);
  report(2, "underapproximation coverage", 300, coverage);
  report(3, "heuristic lattice", 60, lattice);
  report(4, "fast start overtaken", 120, fast_start);
  report(5, "survivor curves", 120, survivor_shapes);
  report(6, "incremental convergence", 300, convergence);
  report(7, "determinism", 60, determinism);
  report(8, "statistics oracles", 60, statistics_oracles);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
