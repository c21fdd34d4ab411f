// mosmc: multi-objective statistical model checking of MDPs.
#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mosmc/errors.hpp"
#include "mosmc/experiment.hpp"
#include "mosmc/generators.hpp"
#include "mosmc/oracle.hpp"

namespace {

using namespace mosmc;

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kModel = 3, kAbort = 4 };

struct ModelSource {
  std::string path;
  std::string spec;
  std::string query;

  void add_to(CLI::App* app) {
    auto* m = app->add_option("--model", path, "Model file (JSON)");
    auto* g = app->add_option("--generate", spec, "Built-in model, e.g. mr, exponential:depth=3, deep-sea:grid=small");
    m->excludes(g);
    app->add_option("--query", query, "Query name inside the model (default: first)");
  }

  std::string name() const { return path.empty() ? spec : path; }

  ModelFile load() const {
    if (path.empty() && spec.empty()) throw ConfigError("one of --model or --generate is required");
    return path.empty() ? generate(spec) : load_model(path);
  }
};

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("malformed coordinate '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

std::vector<Direction> parse_directions(const std::string& text) {
  std::vector<Direction> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "max") out.push_back(Direction::Max);
    else if (item == "min") out.push_back(Direction::Min);
    else throw ConfigError("direction must be max or min, got '" + item + "'");
  }
  return out;
}

void print_front(std::ostream& out, const FrontApproximation& f) {
  for (const auto& c : f.corners) {
    out << "  (" << c.point[0] << ", " << c.point[1] << ")  strategy " << c.source.value << '\n';
  }
}

int run_command(const ModelSource& src, ExperimentConfig config, const std::string& out_dir,
                const std::string& reference) {
  if (!reference.empty()) config.reference = parse_point(reference);
  const ModelFile file = src.load();
  const MultiQuery& query = file.query(src.query);
  const ExperimentResult result = run_experiment(config, file.model, query);
  const ExperimentReport& r = result.report;
  std::cout << "algorithm " << to_string(config.algorithm) << ", heuristic " << to_string(config.heuristic)
            << ", sampled " << r.sampled_strategies << " strategies, " << r.accounting.total_runs() << " runs\n";
  std::cout << "under-approximation (" << r.under.size() << " corners):\n";
  print_front(std::cout, r.under);
  if (!r.over.empty()) {
    std::cout << "over-approximation (" << r.over.size() << " corners):\n";
    print_front(std::cout, r.over);
  }
  std::cout << "reference (" << result.reference[0] << ", " << result.reference[1] << ") [" << result.reference_source
            << "], hypervolume " << result.hv_under;
  if (result.hv_over) std::cout << " (over " << *result.hv_over << ")";
  std::cout << '\n';
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (!out_dir.empty()) {
    write_outputs(out_dir, result, query, src.name());
    std::cout << "wrote " << out_dir << "/{report.json,fronts.csv,iterations.csv,trajectory.csv,timing.json}\n";
  }
  return kOk;
}

int oracle_command(const ModelSource& src, const OracleOptions& options, const std::string& out,
                   const std::string& reference) {
  const ModelFile file = src.load();
  const MultiQuery& query = file.query(src.query);
  if (query.dimension() != 2) throw UnsupportedDimension("the oracle CSV export needs exactly 2 objectives");
  const ExactFront front = exact_pareto_front(file.model, query, options);
  std::ostringstream csv;
  const FrontApproximation fronts[] = {front.hull};
  write_front_csv(csv, fronts);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) throw ConfigError("cannot write " + out);
    f << csv.str();
  }
  std::cerr << "method " << to_string(front.method) << ", " << front.evaluated << " evaluations, "
            << front.corners.size() << " corners\n";
  if (!reference.empty()) {
    const auto ref = parse_point(reference);
    std::cerr << "hypervolume " << hypervolume(front.hull, ref, query.directions()) << '\n';
  }
  return kOk;
}

int gen_command(const std::string& spec, const std::string& out) {
  const ModelFile file = generate(spec);
  if (out.empty()) {
    std::cout << serialize_model(file);
  } else {
    save_model(file, out);
    std::cerr << "wrote " << out << " (" << file.model.num_states() << " states)\n";
  }
  return kOk;
}

int hv_command(const std::vector<std::string>& files, const std::string& reference, const std::string& directions,
               const std::string& kind) {
  const auto ref = parse_point(reference);
  const auto dirs = parse_directions(directions);
  if (dirs.size() != 2 || ref.size() != 2) throw ConfigError("--reference and --directions need 2 entries");
  const FrontKind want = kind == "over" ? FrontKind::Over : FrontKind::Under;
  std::vector<FrontApproximation> fronts;
  std::vector<std::string> labels;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    const auto parsed = read_front_csv(in);
    const auto it = std::find_if(parsed.begin(), parsed.end(), [&](const auto& f) { return f.kind == want; });
    fronts.push_back(it == parsed.end() ? FrontApproximation{want, 2, {}} : *it);
    labels.push_back(path);
  }
  const HvTable t = hv_report(fronts, labels, ref, dirs);
  std::cout << "front,hypervolume\n" << std::setprecision(12);
  for (std::size_t i = 0; i < t.values.size(); ++i) std::cout << t.labels[i] << ',' << t.values[i] << '\n';
  std::cout << "mean," << t.mean << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective statistical model checking of MDPs with lightweight strategy sampling"};
  app.require_subcommand(1);

  ExperimentConfig config;
  ModelSource run_src;
  std::string preset, algorithm = "fsb", heuristic = "simple", out_dir, reference;
  auto* run = app.add_subcommand("run", "Approximate the Pareto front by simulation");
  run_src.add_to(run);
  run->add_option("--algorithm", algorithm, "incremental, wvr, fib, fsb or eval")->capture_default_str();
  run->add_option("--heuristic", heuristic, "simple, fe, ffe, ffw, ffeo or cf")->capture_default_str();
  run->add_option("--preset", preset, "c1, c2 or c3 (explicit flags override)");
  auto* opt_m = run->add_option("-m", config.m, "Initial strategy count (batch size for incremental)");
  auto* opt_n = run->add_option("-n", config.n, "Runs per strategy and iteration");
  auto* opt_i = run->add_option("-I,--iterations", config.iterations, "Iteration count");
  auto* opt_alpha = run->add_option("--alpha", config.alpha, "Total statistical error budget");
  run->add_option("--epsilon", config.epsilon, "Target half-width (incremental)")->capture_default_str();
  run->add_option("--batch-factor", config.batch_factor, "Batch error factor f (incremental)")->capture_default_str();
  std::uint64_t max_batches = 0, max_runs = 0;
  double timeout = 0;
  auto* opt_mb = run->add_option("--max-batches", max_batches, "Stop incremental sampling after this many batches");
  auto* opt_mr = run->add_option("--max-runs", max_runs, "Stop incremental sampling before exceeding this many runs");
  auto* opt_to = run->add_option("--timeout", timeout, "Wall-clock limit in seconds (incremental)");
  run->add_option("--strategy-seed", config.strategy_seed, "Strategy sampling seed")->capture_default_str();
  run->add_option("--sim-seed", config.simulation_seed, "Simulation seed")->capture_default_str();
  run->add_option("--step-limit", config.step_limit, "Transitions per run before truncation")->capture_default_str();
  run->add_option("--reference", reference, "Hypervolume reference point, e.g. 0,120");
  run->add_option("--out-dir", out_dir, "Directory for report.json and CSV exports");
  run->add_option("--workers", config.workers, "Simulation threads")->capture_default_str();

  ModelSource oracle_src;
  OracleOptions oracle_options;
  std::string oracle_method = "auto", oracle_out, oracle_ref;
  auto* oracle = app.add_subcommand("oracle", "Exact Pareto front of a small model");
  oracle_src.add_to(oracle);
  oracle->add_option("--method", oracle_method, "auto, enumerate or dp")->capture_default_str();
  oracle->add_option("--cap", oracle_options.cap, "Enumeration cap")->capture_default_str();
  oracle->add_option("--out", oracle_out, "CSV output file (default: stdout)");
  oracle->add_option("--reference", oracle_ref, "Also print the hypervolume against this point");

  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen", "Write a generated model as JSON");
  gen->add_option("spec", gen_spec, "Generator, e.g. exponential:depth=4")->required();
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  std::vector<std::string> hv_files;
  std::string hv_ref, hv_dirs = "max,max", hv_kind = "under";
  auto* hv = app.add_subcommand("hv", "Hypervolumes of front CSV files and their mean");
  hv->add_option("fronts", hv_files, "fronts.csv files")->required();
  hv->add_option("--reference", hv_ref, "Reference point")->required();
  hv->add_option("--directions", hv_dirs, "Objective directions, e.g. max,min")->capture_default_str();
  hv->add_option("--kind", hv_kind, "Which front of each file: under or over")
      ->check(CLI::IsMember({"under", "over"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) {
      if (!preset.empty()) {
        ExperimentConfig p = ExperimentConfig::preset(preset);
        if (!opt_m->count()) config.m = p.m;
        if (!opt_n->count()) config.n = p.n;
        if (!opt_i->count()) config.iterations = p.iterations;
        if (!opt_alpha->count()) config.alpha = p.alpha;
      }
      config.algorithm = parse_algorithm(algorithm);
      config.heuristic = parse_rule(heuristic);
      if (opt_mb->count()) config.max_batches = max_batches;
      if (opt_mr->count()) config.max_runs = max_runs;
      if (opt_to->count()) config.timeout_seconds = timeout;
      return run_command(run_src, config, out_dir, reference);
    }
    if (*oracle) {
      oracle_options.method = parse_oracle_method(oracle_method);
      return oracle_command(oracle_src, oracle_options, oracle_out, oracle_ref);
    }
    if (*gen) return gen_command(gen_spec, gen_out);
    if (*hv) return hv_command(hv_files, hv_ref, hv_dirs, hv_kind);
  } catch (const StatisticalAbort& e) {
    std::cerr << "statistical abort: " << e.what() << '\n';
    return kAbort;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kModel;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
