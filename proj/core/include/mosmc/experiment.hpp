#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mosmc/algorithms.hpp"
#include "mosmc/geometry.hpp"
#include "mosmc/model_io.hpp"

namespace mosmc {

struct ExperimentResult {
  ExperimentReport report;
  std::vector<double> reference;
  /// Where the reference came from: "config", "bounds" or "observed".
  std::string reference_source;
  double hv_under = 0.0;
  std::optional<double> hv_over;
};

/// Worst value of each objective: its declared bound when present, else the
/// worst pessimistic corner over every evaluated strategy.
std::vector<double> default_reference(const MultiQuery& query, std::span<const StrategyStats* const> stats);

/// Runs the configured algorithm and scores its fronts.
ExperimentResult run_experiment(const ExperimentConfig& config, const Mdp& model, const MultiQuery& query);

struct HvTable {
  std::vector<double> reference;
  std::vector<std::string> labels;
  std::vector<double> values;
  double mean = 0.0;
};

/// Hypervolume of every front against one reference plus their average.
HvTable hv_report(std::span<const FrontApproximation> fronts, std::span<const std::string> labels,
                  std::span<const double> reference, std::span<const Direction> dirs);

/// Deterministic JSON document (no timing information).
std::string report_json(const ExperimentResult& result, const MultiQuery& query, const std::string& model_name);
std::string iterations_csv(const ExperimentReport& report);
std::string trajectory_csv(const ExperimentReport& report);
std::string fronts_csv(const ExperimentReport& report);

/// Writes report.json, fronts.csv, iterations.csv, trajectory.csv and
/// timing.json into `dir` (created if needed).
void write_outputs(const std::filesystem::path& dir, const ExperimentResult& result, const MultiQuery& query,
                   const std::string& model_name);

}  // namespace mosmc
