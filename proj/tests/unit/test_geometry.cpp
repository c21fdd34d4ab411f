#include <doctest.h>

#include <random>
#include <sstream>

#include "mosmc/errors.hpp"
#include "mosmc/geometry.hpp"
#include "oracles.hpp"

using namespace mosmc;

namespace {

const Direction kMaxMax[] = {Direction::Max, Direction::Max};
const Direction kMaxMin[] = {Direction::Max, Direction::Min};

FrontApproximation front_of(std::initializer_list<std::pair<double, double>> pts, std::span<const Direction> dirs,
                            FrontKind kind = FrontKind::Under) {
  std::vector<FrontCorner> corners;
  std::uint32_t id = 0;
  for (auto [x, y] : pts) corners.push_back({{x, y}, StrategyId{id++}});
  return convex_front(corners, dirs, kind);
}

StrategyRecord record(std::uint32_t id, std::vector<DimensionEstimate> dims) {
  StrategyRecord r;
  r.id = StrategyId{id};
  r.box.dims = std::move(dims);
  return r;
}

std::vector<std::pair<double, double>> chain_of(const FrontApproximation& f) {
  std::vector<std::pair<double, double>> out;
  for (const auto& c : f.corners) out.push_back({c.point[0], c.point[1]});
  return out;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("normalize negates minimized dimensions and is involutive") {
  const double p[] = {1.5, -2.0};
  const auto n = normalize(p, kMaxMin);
  CHECK(n == std::vector<double>{1.5, 2.0});
  CHECK(normalize(n, kMaxMin) == std::vector<double>{1.5, -2.0});
}

TEST_CASE("box corners follow the directions") {
  ConfidenceBox box;
  box.dims = {{1.0, 0.5, 1.5}, {10.0, 8.0, 12.0}};
  CHECK(pessimistic_corner(box, kMaxMin) == std::vector<double>{0.5, 12.0});
  CHECK(optimistic_corner(box, kMaxMin) == std::vector<double>{1.5, 8.0});
  CHECK(pessimistic_corner(box, kMaxMax) == std::vector<double>{0.5, 8.0});
}

TEST_CASE("mr model front has three corners and known hypervolume") {
  const FrontApproximation f = front_of({{0, 0}, {0.85, 10}, {3.4, 112}, {0.68, 40.8}}, kMaxMin);
  REQUIRE(f.size() == 3);
  CHECK(f.corners[0].point == std::vector<double>{0, 0});
  CHECK(f.corners[1].point == std::vector<double>{0.85, 10});
  CHECK(f.corners[2].point == std::vector<double>{3.4, 112});
  const double ref[] = {0.0, 120.0};
  CHECK(hypervolume(f, ref, kMaxMin) == doctest::Approx(248.2).epsilon(1e-12));
}

TEST_CASE("collinear and duplicate points collapse") {
  const FrontApproximation f = front_of({{0, 2}, {1, 1}, {2, 0}, {1, 1}, {0.5, 0.5}}, kMaxMax);
  REQUIRE(f.size() == 2);
  CHECK(f.corners[0].point == std::vector<double>{0, 2});
  CHECK(f.corners[1].point == std::vector<double>{2, 0});
  const FrontApproximation single = front_of({{1, 1}, {1, 1}, {0, 0}}, kMaxMax);
  REQUIRE(single.size() == 1);
  CHECK(single.corners[0].source.value == 0);
  CHECK(front_of({}, kMaxMax).empty());
}

TEST_CASE("convex front matches a brute-force hull on random point sets") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<FrontCorner> pts;
    std::vector<std::pair<double, double>> raw;
    const int n = 1 + static_cast<int>(rng() % 25);
    for (int i = 0; i < n; ++i) {
      double x = u(rng), y = u(rng);
      if (t % 3 == 0) y = 1.0 - x * x + 0.05 * y;  // concave-ish clouds give many vertices
      pts.push_back({{x, y}, StrategyId{static_cast<std::uint32_t>(i)}});
      raw.push_back({x, y});
    }
    const auto expected = oracle::brute_force_hull(raw);
    const FrontApproximation f = convex_front(pts, kMaxMax, FrontKind::Under);
    REQUIRE(f.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(f.corners[i].point[0] == expected[i].first);
      CHECK(f.corners[i].point[1] == expected[i].second);
    }
  }
}

TEST_CASE("hypervolume agrees with Monte Carlo on random fronts") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<FrontCorner> pts;
    for (int i = 0; i < 12; ++i) pts.push_back({{u(rng), u(rng)}, StrategyId{static_cast<std::uint32_t>(i)}});
    const FrontApproximation f = convex_front(pts, kMaxMax, FrontKind::Under);
    const double ref[] = {-1.0, -2.0};
    const double hv = hypervolume(f, ref, kMaxMax);
    const double mc = oracle::monte_carlo_hypervolume(chain_of(f), {-1.0, -2.0}, 1'000'000, 100 + t);
    CHECK(std::abs(hv - mc) / hv < 0.01);
  }
}

TEST_CASE("hypervolume edge cases") {
  const FrontApproximation f = front_of({{1, 3}, {3, 1}}, kMaxMax);
  const double origin[] = {0.0, 0.0};
  CHECK(hypervolume(f, origin, kMaxMax) == doctest::Approx(7.0));
  CHECK(hypervolume(front_of({}, kMaxMax), origin, kMaxMax) == 0.0);
  const double bad[] = {2.0, 0.0};
  CHECK_THROWS_AS(hypervolume(f, bad, kMaxMax), ConfigError);
  // Nested fronts are strictly ordered.
  const FrontApproximation g = front_of({{1, 3}, {2, 2.5}, {3, 1}}, kMaxMax);
  CHECK(hypervolume(g, origin, kMaxMax) > hypervolume(f, origin, kMaxMax));
}

TEST_CASE("membership and inclusion") {
  const FrontApproximation f = front_of({{0, 0}, {0.85, 10}, {3.4, 112}}, kMaxMin);
  const double inside[] = {0.5, 50.0};
  const double corner[] = {3.4, 112.0};
  const double outside[] = {3.4, 100.0};
  const double beyond[] = {3.5, 200.0};
  CHECK(front_contains(f, inside, kMaxMin));
  CHECK(front_contains(f, corner, kMaxMin));
  CHECK(!front_contains(f, outside, kMaxMin));
  CHECK(!front_contains(f, beyond, kMaxMin));
  const FrontApproximation g = front_of({{0.1, 5}, {3.0, 115}}, kMaxMin);
  CHECK(is_inside(g, f, kMaxMin));
  CHECK(!is_inside(f, g, kMaxMin));
  CHECK(is_inside(front_of({}, kMaxMin), f, kMaxMin));
}

TEST_CASE("max-gap direction picks the facet with the widest gap") {
  const FrontApproximation under = front_of({{0, 2}, {2, 0}}, kMaxMax);
  const FrontApproximation over = front_of({{0, 2}, {1.5, 1.5}, {2, 0}}, kMaxMax, FrontKind::Over);
  const auto w = max_gap_direction(under, over, kMaxMax);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
  const FrontApproximation right = front_of({{0, 2}, {3, 0}}, kMaxMax, FrontKind::Over);
  const auto r = max_gap_direction(under, right, kMaxMax);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(0.0));
  const auto same = max_gap_direction(under, under, kMaxMax);
  CHECK(same == std::vector<double>{0.5, 0.5});
}

TEST_CASE("fronts from confidence boxes") {
  StrategyStats stats;
  stats[StrategyId{1}] = record(1, {{1.0, 0.9, 1.1}, {5.0, 4.0, 6.0}});
  stats[StrategyId{2}] = record(2, {{2.0, 1.8, 2.2}, {1.0, 0.5, 1.5}});
  stats[StrategyId{3}] = record(3, {{0.5, 0.4, 0.6}, {0.5, 0.4, 0.6}});
  const FrontApproximation under = build_front(stats, kMaxMax, FrontKind::Under);
  const FrontApproximation over = build_front(stats, kMaxMax, FrontKind::Over);
  REQUIRE(under.size() == 2);
  CHECK(under.corners[0].point == std::vector<double>{0.9, 4.0});
  CHECK(under.corners[1].source == StrategyId{2});
  CHECK(over.corners[0].point == std::vector<double>{1.1, 6.0});
  CHECK(is_inside(under, over, kMaxMax));
  CHECK(nondominated_corners(stats, kMaxMax, FrontKind::Under).size() == 2);
}

TEST_CASE("csv round trip keeps corners and order") {
  const FrontApproximation a = front_of({{0, 0}, {0.85, 10}, {3.4, 112}}, kMaxMin);
  const FrontApproximation b = front_of({{0.1, 1}, {3.5, 100}}, kMaxMin, FrontKind::Over);
  std::stringstream io;
  const FrontApproximation both[] = {a, b};
  write_front_csv(io, both);
  CHECK(io.str().rfind("dim1,dim2,kind,strategy_id\n", 0) == 0);
  const auto back = read_front_csv(io);
  REQUIRE(back.size() == 2);
  CHECK(back[0].corners == a.corners);
  CHECK(back[1].kind == FrontKind::Over);
  CHECK(back[1].corners == b.corners);
  std::stringstream bad("dim1,dim2,kind,strategy_id\n1,x,under,0\n");
  CHECK_THROWS(read_front_csv(bad));
}

TEST_CASE("three objectives are rejected by the 2-D routines") {
  const Direction three[] = {Direction::Max, Direction::Max, Direction::Max};
  CHECK_THROWS_AS(convex_front({}, three, FrontKind::Under), UnsupportedDimension);
}

}
