#include <doctest.h>

#include <cmath>

#include "mosmc/errors.hpp"
#include "mosmc/statistics.hpp"
#include "oracles.hpp"

using namespace mosmc;

TEST_SUITE("statistics") {

TEST_CASE("Clopper-Pearson matches binomial tail inversion") {
  const std::uint64_t ns[] = {1, 10, 50, 200};
  const double alphas[] = {0.1, 0.01};
  for (std::uint64_t n : ns) {
    for (double alpha : alphas) {
      for (std::uint64_t x : {std::uint64_t{0}, n / 3, n / 2, n}) {
        const Interval ci = clopper_pearson(x, n, alpha);
        const auto [lo, hi] = oracle::clopper_pearson(x, n, alpha);
        CAPTURE(n);
        CAPTURE(x);
        CHECK(std::abs(ci.lower - lo) < 1e-9);
        CHECK(std::abs(ci.upper - hi) < 1e-9);
      }
    }
  }
}

TEST_CASE("Clopper-Pearson closed forms at the extremes") {
  const Interval z = clopper_pearson(0, 20, 0.05);
  CHECK(z.lower == 0.0);
  CHECK(z.upper == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 20)).epsilon(1e-10));
  const Interval a = clopper_pearson(20, 20, 0.05);
  CHECK(a.upper == 1.0);
  CHECK(a.lower == doctest::Approx(std::pow(0.025, 1.0 / 20)).epsilon(1e-10));
}

TEST_CASE("Clopper-Pearson rejects bad arguments") {
  CHECK_THROWS_AS(clopper_pearson(3, 2, 0.1), ConfigError);
  CHECK_THROWS_AS(clopper_pearson(0, 0, 0.1), ConfigError);
  CHECK_THROWS_AS(clopper_pearson(1, 2, 0.0), ConfigError);
  CHECK_THROWS_AS(clopper_pearson(1, 2, 1.0), ConfigError);
}

TEST_CASE("Student-t critical values against table entries") {
  CHECK(student_t_critical(0.05, 1) == doctest::Approx(12.7062).epsilon(1e-5));
  CHECK(student_t_critical(0.05, 10) == doctest::Approx(2.22814).epsilon(1e-5));
  CHECK(student_t_critical(0.01, 30) == doctest::Approx(2.75000).epsilon(1e-5));
  CHECK(student_t_critical(0.05, 100000) == doctest::Approx(1.95998).epsilon(1e-4));
}

TEST_CASE("sample summary moments") {
  SampleSummary s;
  for (double x : {1.0, 2.0, 3.0, 4.0}) s.add(x);
  CHECK(s.mean() == 2.5);
  CHECK(s.variance() == doctest::Approx(5.0 / 3.0));
  SampleSummary c;
  for (int i = 0; i < 10; ++i) c.add(0.1);
  CHECK(c.variance() == 0.0);
}

TEST_CASE("mean intervals") {
  SampleSummary s;
  for (double x : {1.0, 2.0, 3.0, 4.0}) s.add(x);
  const Interval t = mean_ci(s, 0.05, CiMethod::StudentT);
  const double hw = student_t_critical(0.05, 3) * std::sqrt(5.0 / 3.0 / 4.0);
  CHECK(t.lower == doctest::Approx(2.5 - hw));
  CHECK(t.upper == doctest::Approx(2.5 + hw));
  const Interval h = mean_ci(s, 0.05, CiMethod::Hoeffding, ValueBounds{0.0, 5.0});
    CHECK(h.half_width() == doctest::Approx(hoeffding_half_width(4, 0.05, {0.0, 5.0})));
  CHECK_THROWS_AS(mean_ci(s, 0.05, CiMethod::Hoeffding), ConfigError);
}

TEST_CASE("Hoeffding half-width formula") {
  CHECK(hoeffding_half_width(100, 0.05, {0.0, 1.0}) == doctest::Approx(std::sqrt(std::log(40.0) / 200.0)));
  CHECK(hoeffding_half_width(100, 0.05, {-1.0, 3.0}) == doctest::Approx(4.0 * std::sqrt(std::log(40.0) / 200.0)));
}

TEST_CASE("runs_for_precision is the minimal sufficient count") {
  for (double eps : {0.05, 0.1, 0.2}) {
    for (double alpha : {0.1, 0.01}) {
      const std::uint64_t n = runs_for_precision(eps, alpha, ObjectiveKind::ProbReach);
      CHECK(worst_case_cp_half_width(n, alpha) <= eps);
      CHECK(worst_case_cp_half_width(n - 1, alpha) > eps);
      // Brute force: the widest interval over all success counts.
      double widest = 0.0;
      for (std::uint64_t x = 0; x <= n; ++x) widest = std::max(widest, clopper_pearson(x, n, alpha).half_width());
      CHECK(widest <= eps + 1e-12);
      const ValueBounds b{0.0, 2.0};
      const std::uint64_t m = runs_for_precision(eps, alpha, ObjectiveKind::ExpReward, b);
      CHECK(hoeffding_half_width(m, alpha, b) <= eps);
      CHECK(hoeffding_half_width(m - 1, alpha, b) > eps);
    }
  }
  CHECK_THROWS_AS(runs_for_precision(0.1, 0.1, ObjectiveKind::ExpReward), ConfigError);
}

TEST_CASE("runs_for_precision grows as alpha shrinks") {
  std::uint64_t prev = 0;
  for (double alpha = 0.1; alpha > 1e-8; alpha /= 10) {
    const std::uint64_t n = runs_for_precision(0.05, alpha, ObjectiveKind::ProbReach);
    CHECK(n > prev);
    prev = n;
  }
}

TEST_CASE("batch error budgets sum to alpha") {
  double total = 0.0;
  for (std::uint64_t i = 1; i <= 2000; ++i) total += batch_alpha(0.1, 0.1, i);
  CHECK(total == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(batch_alpha(0.1, 0.5, 1) == doctest::Approx(0.05));
  CHECK(batch_alpha(0.1, 0.5, 3) == doctest::Approx(0.0125));
}

TEST_CASE("union bound split") {
  const BudgetSplit s = BudgetSplit::uniform(0.1, 10, 2);
  CHECK(s.per_strategy == doctest::Approx(0.01));
  CHECK(s.per_dimension == doctest::Approx(0.005));
}

}
