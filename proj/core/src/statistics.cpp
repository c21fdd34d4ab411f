#include "mosmc/statistics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "mosmc/errors.hpp"

namespace mosmc {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

/// p with I_p(a, b) = target; I_p is increasing in p.
double beta_quantile(double a, double b, double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (boost::math::ibeta(a, b, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Interval clopper_pearson(std::uint64_t successes, std::uint64_t n, double alpha) {
  check_alpha(alpha);
  if (n == 0) throw ConfigError("clopper_pearson: n must be at least 1");
  if (successes > n) throw ConfigError("clopper_pearson: successes exceed n");
  const auto x = static_cast<double>(successes);
  const auto nn = static_cast<double>(n);
  Interval ci;
  ci.lower = successes == 0 ? 0.0 : beta_quantile(x, nn - x + 1.0, alpha / 2.0);
  ci.upper = successes == n ? 1.0 : beta_quantile(x + 1.0, nn - x, 1.0 - alpha / 2.0);
  return ci;
}

double SampleSummary::mean() const {
  if (count == 0) return 0.0;
  if (min == max) return min;
  return sum / static_cast<double>(count);
}

double SampleSummary::variance() const {
  if (count < 2 || min == max) return 0.0;
  const auto n = static_cast<double>(count);
  return std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
}

double student_t_critical(double alpha, std::uint64_t dof) {
  check_alpha(alpha);
  const boost::math::students_t_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 1.0 - alpha / 2.0);
}

double hoeffding_half_width(std::uint64_t n, double alpha, ValueBounds bounds) {
  return (bounds.hi - bounds.lo) * std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

Interval mean_ci(const SampleSummary& samples, double alpha, CiMethod method,
                 std::optional<ValueBounds> bounds) {
  check_alpha(alpha);
  const double mean = samples.mean();
  switch (method) {
    case CiMethod::StudentT: {
      if (samples.count < 2) throw ConfigError("Student-t interval needs at least 2 samples");
      const double var = samples.variance();
      if (var == 0.0) return {mean, mean};
      const double half = student_t_critical(alpha, samples.count - 1) *
                          std::sqrt(var / static_cast<double>(samples.count));
      return {mean - half, mean + half};
    }
    case CiMethod::Hoeffding: {
      if (!bounds) throw ConfigError("Hoeffding interval needs known value bounds");
      if (samples.count == 0) throw ConfigError("Hoeffding interval needs at least 1 sample");
      const double half = hoeffding_half_width(samples.count, alpha, *bounds);
      return {mean - half, mean + half};
    }
  }
  return {mean, mean};
}

double worst_case_cp_half_width(std::uint64_t n, double alpha) {
  const Interval a = clopper_pearson(n / 2, n, alpha);
  const Interval b = clopper_pearson((n + 1) / 2, n, alpha);
  return std::max(a.half_width(), b.half_width());
}

std::uint64_t runs_for_precision(double epsilon, double alpha, ObjectiveKind kind,
                                 std::optional<ValueBounds> bounds) {
  if (!(epsilon > 0.0)) throw ConfigError("precision epsilon must be positive");
  check_alpha(alpha);
  if (kind == ObjectiveKind::ExpReward) {
    if (!bounds) {
      throw ConfigError(
          "fixed-precision evaluation of an expected-reward objective needs declared value bounds; "
          "declare bounds on the objective or use a fixed run count");
    }
    const double range = bounds->hi - bounds->lo;
    if (range == 0.0) return 1;
    const double n = range * range * std::log(2.0 / alpha) / (2.0 * epsilon * epsilon);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(n)));
  }
  // Worst-case width shrinks monotonically in n; exponential then binary search.
  auto fits = [&](std::uint64_t n) { return worst_case_cp_half_width(n, alpha) <= epsilon; };
  if (fits(1)) return 1;
  std::uint64_t lo = 1;  // does not fit
  std::uint64_t hi = 2;
  while (!fits(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (fits(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double batch_alpha(double alpha, double f, std::uint64_t batch_index) {
  check_alpha(alpha);
  if (!(f > 0.0 && f < 1.0)) throw ConfigError("batch factor f must lie in (0, 1)");
  if (batch_index == 0) throw ConfigError("batch index starts at 1");
  return std::pow(1.0 - f, static_cast<double>(batch_index - 1)) * f * alpha;
}

}  // namespace mosmc
