#include "mosmc/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mosmc/errors.hpp"

namespace mosmc {

namespace {

using nlohmann::json;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("failed writing " + path.string());
}

json stats_json(const StrategyStats& stats) {
  json arr = json::array();
  for (const auto& [id, rec] : stats) {
    json dims = json::array();
    for (const auto& d : rec.box.dims) dims.push_back({{"mean", d.mean}, {"lower", d.lower}, {"upper", d.upper}});
    arr.push_back({{"id", id.value},
                   {"runs", rec.runs},
                   {"transitions", rec.transitions},
                   {"truncated_runs", rec.truncated_runs},
                   {"confidence", rec.box.confidence},
                   {"dims", std::move(dims)}});
  }
  return arr;
}

json front_json(const FrontApproximation& f) {
  json arr = json::array();
  for (const auto& c : f.corners) arr.push_back({{"point", c.point}, {"strategy_id", c.source.value}});
  return arr;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

std::vector<double> default_reference(const MultiQuery& query, std::span<const StrategyStats* const> stats) {
  const auto dirs = query.directions();
  const std::size_t d = query.dimension();
  std::vector<double> ref(d);
  for (std::size_t i = 0; i < d; ++i) {
    const Objective& o = query.objectives[i];
    if (o.bounds) {
      ref[i] = dirs[i] == Direction::Max ? o.bounds->lo : o.bounds->hi;
      continue;
    }
    double worst = std::numeric_limits<double>::quiet_NaN();
    for (const StrategyStats* s : stats) {
      for (const auto& [id, rec] : *s) {
        if (rec.box.dims.size() != d) continue;
        const double v = pessimistic_corner(rec.box, dirs)[i];
        if (std::isnan(worst) || (dirs[i] == Direction::Max ? v < worst : v > worst)) worst = v;
      }
    }
    ref[i] = std::isnan(worst) ? 0.0 : worst;
  }
  return ref;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query) {
  if (query.dimension() != 2) {
    throw UnsupportedDimension("experiments support exactly 2 objectives, query '" + query.name + "' has " +
                               std::to_string(query.dimension()));
  }
  if (config.reference && config.reference->size() != query.dimension()) {
    throw ConfigError("reference point needs " + std::to_string(query.dimension()) + " coordinates");
  }
  ExperimentResult result;
  result.report = run_algorithm(config, model, query);
  const auto dirs = query.directions();
  if (config.reference) {
    result.reference = *config.reference;
    result.reference_source = "config";
  } else {
    const StrategyStats* all[] = {&result.report.heuristic_stats, &result.report.evaluation_stats};
    result.reference = default_reference(query, all);
    const bool bounded = std::all_of(query.objectives.begin(), query.objectives.end(),
                                     [](const Objective& o) { return o.bounds.has_value(); });
    result.reference_source = bounded ? "bounds" : "observed";
  }
  result.hv_under = hypervolume(result.report.under, result.reference, dirs);
  if (config.algorithm == Algorithm::Incremental) {
    result.hv_over = hypervolume(result.report.over, result.reference, dirs);
  }
  return result;
}

HvTable hv_report(std::span<const FrontApproximation> fronts, std::span<const std::string> labels,
                  std::span<const double> reference, std::span<const Direction> dirs) {
  if (fronts.empty()) throw ConfigError("hv report needs at least one front");
  if (labels.size() != fronts.size()) throw ConfigError("hv report needs one label per front");
  HvTable t;
  t.reference.assign(reference.begin(), reference.end());
  t.labels.assign(labels.begin(), labels.end());
  double sum = 0.0;
  for (const auto& f : fronts) {
    const double hv = hypervolume(f, reference, dirs);
    t.values.push_back(hv);
    sum += hv;
  }
  t.mean = sum / static_cast<double>(fronts.size());
  return t;
}

std::string report_json(const ExperimentResult& result, const MultiQuery& query, const std::string& model_name) {
  const ExperimentReport& r = result.report;
  const ExperimentConfig& c = r.config;
  json j;
  j["schema"] = "mosmc-report";
  j["version"] = 1;
  j["model"] = model_name;
  j["query"] = query.name;
  json objectives = json::array();
  for (const auto& o : query.objectives) {
    objectives.push_back({{"label", o.label},
                          {"kind", o.kind == ObjectiveKind::ProbReach ? "reach" : "reward"},
                          {"direction", o.direction == Direction::Max ? "max" : "min"}});
  }
  j["objectives"] = std::move(objectives);
  json cfg;
  cfg["algorithm"] = to_string(c.algorithm);
  cfg["heuristic"] = to_string(c.heuristic);
  cfg["m"] = c.m;
  cfg["n"] = c.n;
  cfg["iterations"] = c.iterations;
  cfg["alpha"] = c.alpha;
  cfg["epsilon"] = c.epsilon;
  cfg["batch_factor"] = c.batch_factor;
  cfg["strategy_seed"] = c.strategy_seed;
  cfg["simulation_seed"] = c.simulation_seed;
  cfg["step_limit"] = c.step_limit;
  cfg["max_batches"] = c.max_batches ? json(*c.max_batches) : json(nullptr);
  cfg["max_runs"] = c.max_runs ? json(*c.max_runs) : json(nullptr);
  cfg["timeout"] = c.timeout_seconds ? json(*c.timeout_seconds) : json(nullptr);
  j["config"] = std::move(cfg);
  j["reference"] = result.reference;
  j["reference_source"] = result.reference_source;
  j["hypervolume"] = {{"under", result.hv_under}, {"over", result.hv_over ? json(*result.hv_over) : json(nullptr)}};
  j["fronts"] = {{"under", front_json(r.under)}, {"over", front_json(r.over)}};
  json cands = json::array();
  for (StrategyId id : r.candidates) cands.push_back(id.value);
  j["candidates"] = std::move(cands);
  j["sampled_strategies"] = r.sampled_strategies;
  json survivors = json::array();
  for (const auto& it : r.iterations) survivors.push_back(it.survivors);
  j["survivors_per_iteration"] = std::move(survivors);
  j["accounting"] = {{"heuristic_budget", r.accounting.heuristic_budget},
                     {"heuristic_runs", r.accounting.heuristic_runs},
                     {"evaluation_budget", r.accounting.evaluation_budget},
                     {"evaluation_runs", r.accounting.evaluation_runs},
                     {"total_runs", r.accounting.total_runs()},
                     {"unused", r.accounting.unused},
                     {"transitions", r.accounting.transitions},
                     {"truncated_runs", r.accounting.truncated_runs}};
  j["stop_reason"] = r.stop_reason;
  j["approximate"] = r.approximate;
  j["warnings"] = r.warnings;
  j["heuristic_stats"] = stats_json(r.heuristic_stats);
  j["evaluation_stats"] = stats_json(r.evaluation_stats);
  return j.dump(2) + "\n";
}

std::string iterations_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "iteration,survivors,runs,w1,w2\n";
  for (const auto& it : report.iterations) {
    out << it.iteration << ',' << it.survivors << ',' << it.runs << ',';
    if (it.weights.size() == 2) out << fmt(it.weights[0]) << ',' << fmt(it.weights[1]);
    else out << ',';
    out << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "batch,position,strategy_id,runs,cumulative_runs\n";
  for (const auto& p : report.trajectory) {
    out << p.batch << ',' << p.position << ',' << p.id.value << ',' << p.runs << ',' << p.cumulative_runs << '\n';
  }
  return out.str();
}

std::string fronts_csv(const ExperimentReport& report) {
  std::ostringstream out;
  std::vector<FrontApproximation> fronts{report.under};
  if (!report.over.empty()) fronts.push_back(report.over);
  write_front_csv(out, fronts);
  return out.str();
}

void write_outputs(const std::filesystem::path& dir, const ExperimentResult& result, const MultiQuery& query,
                   const std::string& model_name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file(dir / "report.json", report_json(result, query, model_name));
  write_file(dir / "fronts.csv", fronts_csv(result.report));
  write_file(dir / "iterations.csv", iterations_csv(result.report));
  write_file(dir / "trajectory.csv", trajectory_csv(result.report));
  json timing = {{"wall_seconds", result.report.wall_seconds}};
  write_file(dir / "timing.json", timing.dump(2) + "\n");
}

}  // namespace mosmc
