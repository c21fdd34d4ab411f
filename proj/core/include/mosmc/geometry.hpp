#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mosmc/mdp.hpp"
#include "mosmc/smc.hpp"

namespace mosmc {

/// Negates Min dimensions so that every dimension is maximised. Involutive.
std::vector<double> normalize(std::span<const double> point, std::span<const Direction> dirs);

/// Box corner that is worst in every objective's direction.
std::vector<double> pessimistic_corner(const ConfidenceBox& box, std::span<const Direction> dirs);
/// Box corner that is best in every objective's direction.
std::vector<double> optimistic_corner(const ConfidenceBox& box, std::span<const Direction> dirs);

enum class FrontKind { Under, Over };

struct FrontCorner {
  std::vector<double> point;  // original (non-normalized) coordinates
  StrategyId source;

  bool operator==(const FrontCorner&) const = default;
};

/// Convex staircase approximating a Pareto front in two dimensions.
///
/// Corners are kept in chain order: strictly increasing in the first and
/// strictly decreasing in the second normalized coordinate, with every turn
/// convex. The represented region is everything dominated by the chain,
/// bounded by a horizontal ray left of the first corner and a vertical ray
/// below the last.
struct FrontApproximation {
  FrontKind kind = FrontKind::Under;
  std::size_t dimension = 2;
  std::vector<FrontCorner> corners;

  bool empty() const { return corners.empty(); }
  std::size_t size() const { return corners.size(); }
};

/// Pareto-relevant upper convex hull of arbitrary 2-D points. Points equal
/// to within 1e-12 in both coordinates are merged, keeping the smallest id.
FrontApproximation convex_front(std::vector<FrontCorner> points, std::span<const Direction> dirs,
                                FrontKind kind);

/// Under front from pessimistic corners or over front from optimistic corners
/// of every strategy in `stats`. Two dimensions only.
FrontApproximation build_front(const StrategyStats& stats, std::span<const Direction> dirs, FrontKind kind);

/// Non-dominated corner set without convex closure; works in any dimension.
std::vector<FrontCorner> nondominated_corners(const StrategyStats& stats, std::span<const Direction> dirs,
                                              FrontKind kind);

/// Area dominated by the front and dominating `reference`, in normalized
/// space. Returns 0 for an empty front; throws ConfigError when some corner
/// does not dominate the reference.
double hypervolume(const FrontApproximation& front, std::span<const double> reference,
                   std::span<const Direction> dirs);

/// Weight vector (non-negative, summing to 1, normalized space) along the
/// outward normal of the under-front facet with the largest gap to the over
/// front. Facet 0 is the left ray, then the segments, then the bottom ray;
/// ties go to the smaller index. Returns (1/2, 1/2) when all gaps vanish.
std::vector<double> max_gap_direction(const FrontApproximation& under, const FrontApproximation& over,
                                      std::span<const Direction> dirs);

/// True when `point` lies in the region the front represents (within tol).
bool front_contains(const FrontApproximation& front, std::span<const double> point,
                    std::span<const Direction> dirs, double tol = 1e-9);

/// True when every corner of `candidate` lies in the region of `truth`.
bool is_inside(const FrontApproximation& candidate, const FrontApproximation& truth,
               std::span<const Direction> dirs, double tol = 1e-9);

std::string to_string(FrontKind kind);

/// CSV with header `dim1,dim2,kind,strategy_id`; corners in chain order.
void write_front_csv(std::ostream& out, std::span<const FrontApproximation> fronts);
std::vector<FrontApproximation> read_front_csv(std::istream& in);

}  // namespace mosmc
