#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mosmc/geometry.hpp"
#include "mosmc/mdp.hpp"

namespace mosmc {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Number of deterministic memoryless strategies (product of action counts).
/// Throws ConfigError when it exceeds `cap`.
std::uint64_t count_strategies(const Mdp& model, std::uint64_t cap = kDefaultEnumerationCap);

/// Calls `visit` for every per-state action map in lexicographic order
/// (state 0 most significant, actions in canonical order). Returning false
/// from `visit` stops the enumeration.
void enumerate_strategies(const Mdp& model, const std::function<bool(const StrategyMap&)>& visit,
                          std::uint64_t cap = kDefaultEnumerationCap);

/// Exact value of one objective under a deterministic memoryless strategy,
/// by solving the linear system of the induced chain on its reachable part.
/// Throws ModelError when an expected-reward goal is not reached almost
/// surely, or when the system is singular.
double exact_value(const Mdp& model, std::span<const ActionIndex> strategy, const Objective& objective);
std::vector<double> exact_values(const Mdp& model, std::span<const ActionIndex> strategy,
                                 const MultiQuery& query);

struct ExactPoint {
  std::vector<double> value;
  StrategyMap strategy;
  /// Position in the oracle's enumeration order.
  std::uint64_t rank = 0;
};

enum class OracleMethod {
  /// Weighted-sum DP when the model admits it, enumeration otherwise.
  Auto,
  /// Every strategy that differs on states it actually reaches.
  Enumerate,
  /// Dichotomic weighted-sum search with backward induction (2 objectives,
  /// common goal set, acyclic before the goal).
  WeightedSum,
};

std::string to_string(OracleMethod m);
OracleMethod parse_oracle_method(std::string_view name);

struct ExactFront {
  OracleMethod method = OracleMethod::Enumerate;
  /// Non-dominated corner points with witnessing strategies, in chain order
  /// for two objectives.
  std::vector<ExactPoint> corners;
  /// Convex hull of the corners (two objectives only), ids are ranks.
  FrontApproximation hull{FrontKind::Under, 2, {}};
  /// Strategies (enumeration) or weighted-sum problems (DP) solved.
  std::uint64_t evaluated = 0;
  /// All enumerated points, kept only on request.
  std::vector<ExactPoint> points;
};

struct OracleOptions {
  OracleMethod method = OracleMethod::Auto;
  std::uint64_t cap = kDefaultEnumerationCap;
  bool keep_points = false;
};

/// Exact Pareto front of the achievable set of `query` on `model`.
///
/// Enumeration assigns actions only to states reachable under the partial
/// strategy built so far, so strategies that agree wherever they matter are
/// evaluated once; it refuses with ConfigError beyond `cap` classes.
ExactFront exact_pareto_front(const Mdp& model, const MultiQuery& query, const OracleOptions& options = {});

/// Whether the weighted-sum oracle applies (2 objectives, one common goal
/// set, no cycle among non-goal states reachable from the initial state).
bool weighted_sum_applicable(const Mdp& model, const MultiQuery& query, std::string* reason = nullptr);

/// Optimal strategy for the scalarization w . normalize(value), ties broken
/// by tiebreak . normalize(value) and then by the smaller action index.
ExactPoint optimize_weighted(const Mdp& model, const MultiQuery& query, std::span<const double> w,
                             std::span<const double> tiebreak);

}  // namespace mosmc
