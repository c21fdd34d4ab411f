#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "mosmc/mdp.hpp"

namespace mosmc {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double half_width() const { return (upper - lower) / 2.0; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Exact (Clopper-Pearson) two-sided binomial interval at level 1 - alpha.
/// Bounds are Beta quantiles found by bisection on the regularized
/// incomplete Beta function to 1e-12.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t n, double alpha);

/// Streaming summary of one dimension's samples.
struct SampleSummary {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
    if (x < min) min = x;
    if (x > max) max = x;
  }
  double mean() const;
  /// Unbiased sample variance; exactly 0 when all samples are equal.
  double variance() const;
};

enum class CiMethod { StudentT, Hoeffding };

/// Interval for the mean. StudentT needs count >= 2; Hoeffding needs bounds.
Interval mean_ci(const SampleSummary& samples, double alpha, CiMethod method,
                 std::optional<ValueBounds> bounds = std::nullopt);

/// Two-sided Student-t quantile t_{1 - alpha/2, dof}.
double student_t_critical(double alpha, std::uint64_t dof);

/// Hoeffding half-width (hi - lo) * sqrt(ln(2/alpha) / (2n)).
double hoeffding_half_width(std::uint64_t n, double alpha, ValueBounds bounds);

/// Half-width of the widest Clopper-Pearson interval for n trials, taken at
/// the success counts closest to n/2.
double worst_case_cp_half_width(std::uint64_t n, double alpha);

/// Smallest run count whose interval half-width is guaranteed <= epsilon.
std::uint64_t runs_for_precision(double epsilon, double alpha, ObjectiveKind kind,
                                 std::optional<ValueBounds> bounds = std::nullopt);

/// Error budget of the i-th incremental batch: (1-f)^(i-1) * f * alpha.
double batch_alpha(double alpha, double f, std::uint64_t batch_index);

/// Union-bound split of a total error budget over strategies and dimensions.
struct BudgetSplit {
  double alpha_total = 0.0;
  double per_strategy = 0.0;
  double per_dimension = 0.0;

  static BudgetSplit uniform(double alpha_total, std::uint64_t strategies, std::size_t dimension) {
    const double per_strategy = alpha_total / static_cast<double>(strategies);
    return {alpha_total, per_strategy, per_strategy / static_cast<double>(dimension)};
  }
};

}  // namespace mosmc
