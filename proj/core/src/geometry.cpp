#include "mosmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "mosmc/errors.hpp"

namespace mosmc {

namespace {

constexpr double kMergeTolerance = 1e-12;
constexpr double kCollinearTolerance = 1e-12;

struct Normalized {
  double x;
  double y;
  const FrontCorner* corner;
};

void require_2d(std::size_t d, const char* what) {
  if (d != 2) {
    throw UnsupportedDimension(std::string(what) + " supports exactly 2 objectives, got " + std::to_string(d));
  }
}

double cross(const Normalized& o, const Normalized& a, const Normalized& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Normalized> normalized_chain(const FrontApproximation& front, std::span<const Direction> dirs) {
  std::vector<Normalized> out;
  out.reserve(front.corners.size());
  for (const auto& c : front.corners) {
    const auto p = normalize(c.point, dirs);
    out.push_back({p[0], p[1], &c});
  }
  return out;
}

}  // namespace

std::vector<double> normalize(std::span<const double> point, std::span<const Direction> dirs) {
  if (point.size() != dirs.size()) throw ConfigError("normalize: point and direction lengths differ");
  std::vector<double> out(point.begin(), point.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (dirs[i] == Direction::Min) out[i] = -out[i];
  }
  return out;
}

std::vector<double> pessimistic_corner(const ConfidenceBox& box, std::span<const Direction> dirs) {
  if (box.dims.size() != dirs.size()) throw ConfigError("box and direction lengths differ");
  std::vector<double> out(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    out[i] = dirs[i] == Direction::Max ? box.dims[i].lower : box.dims[i].upper;
  }
  return out;
}

std::vector<double> optimistic_corner(const ConfidenceBox& box, std::span<const Direction> dirs) {
  if (box.dims.size() != dirs.size()) throw ConfigError("box and direction lengths differ");
  std::vector<double> out(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    out[i] = dirs[i] == Direction::Max ? box.dims[i].upper : box.dims[i].lower;
  }
  return out;
}

FrontApproximation convex_front(std::vector<FrontCorner> points, std::span<const Direction> dirs,
                                FrontKind kind) {
  require_2d(dirs.size(), "convex front construction");
  FrontApproximation front{kind, 2, {}};
  if (points.empty()) return front;

  std::vector<Normalized> pts;
  pts.reserve(points.size());
  for (const auto& c : points) {
    const auto p = normalize(c.point, dirs);
    pts.push_back({p[0], p[1], &c});
  }
  // Pareto filter: sweep by x descending, keep strictly higher y.
  std::sort(pts.begin(), pts.end(), [](const Normalized& a, const Normalized& b) {
    if (a.x != b.x) return a.x > b.x;
    if (a.y != b.y) return a.y > b.y;
    return a.corner->source < b.corner->source;
  });
  std::vector<Normalized> maximal;
  for (const auto& p : pts) {
    if (!maximal.empty()) {
      const auto& last = maximal.back();
      if (p.y <= last.y) continue;
      if (std::abs(p.x - last.x) <= kMergeTolerance && std::abs(p.y - last.y) <= kMergeTolerance) continue;
    }
    maximal.push_back(p);
  }
  std::reverse(maximal.begin(), maximal.end());  // x ascending, y descending

  // Upper hull (monotone chain): keep clockwise turns only.
  std::vector<Normalized> hull;
  for (const auto& p : maximal) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double scale = std::hypot(a.x - o.x, a.y - o.y) * std::hypot(p.x - o.x, p.y - o.y);
      if (cross(o, a, p) >= -kCollinearTolerance * scale) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  front.corners.reserve(hull.size());
  for (const auto& h : hull) front.corners.push_back(*h.corner);
  return front;
}

FrontApproximation build_front(const StrategyStats& stats, std::span<const Direction> dirs, FrontKind kind) {
  require_2d(dirs.size(), "front construction");
  std::vector<FrontCorner> points;
  points.reserve(stats.size());
  for (const auto& [id, rec] : stats) {
    points.push_back({kind == FrontKind::Under ? pessimistic_corner(rec.box, dirs)
                                               : optimistic_corner(rec.box, dirs),
                      id});
  }
  return convex_front(std::move(points), dirs, kind);
}

std::vector<FrontCorner> nondominated_corners(const StrategyStats& stats, std::span<const Direction> dirs,
                                              FrontKind kind) {
  std::vector<FrontCorner> points;
  std::vector<std::vector<double>> norm;
  for (const auto& [id, rec] : stats) {
    points.push_back({kind == FrontKind::Under ? pessimistic_corner(rec.box, dirs)
                                               : optimistic_corner(rec.box, dirs),
                      id});
    norm.push_back(normalize(points.back().point, dirs));
  }
  std::vector<FrontCorner> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (i == j) continue;
      bool weakly = true;
      bool equal = true;
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        if (norm[j][k] < norm[i][k]) weakly = false;
        if (norm[j][k] != norm[i][k]) equal = false;
      }
      // Among identical points the smallest id survives (stats is id-ordered).
      dominated = weakly && (!equal || j < i);
    }
    if (!dominated) out.push_back(points[i]);
  }
  return out;
}

double hypervolume(const FrontApproximation& front, std::span<const double> reference,
                   std::span<const Direction> dirs) {
  require_2d(dirs.size(), "hypervolume");
  if (reference.size() != 2) throw ConfigError("hypervolume reference must have 2 coordinates");
  if (front.empty()) return 0.0;
  const auto ref = normalize(reference, dirs);
  const auto chain = normalized_chain(front, dirs);
  for (const auto& c : chain) {
    if (c.x < ref[0] || c.y < ref[1]) {
      std::ostringstream msg;
      msg << "reference point (" << reference[0] << ", " << reference[1]
          << ") is not dominated by front corner (" << c.corner->point[0] << ", " << c.corner->point[1] << ")";
      throw ConfigError(msg.str());
    }
  }
  double area = (chain.front().x - ref[0]) * (chain.front().y - ref[1]);
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    const double width = chain[j + 1].x - chain[j].x;
    area += width * (0.5 * (chain[j].y + chain[j + 1].y) - ref[1]);
  }
  return area;
}

std::vector<double> max_gap_direction(const FrontApproximation& under, const FrontApproximation& over,
                                      std::span<const Direction> dirs) {
  require_2d(dirs.size(), "max-gap direction");
  if (under.empty() || over.empty()) throw ConfigError("max-gap direction needs two non-empty fronts");
  const auto u = normalized_chain(under, dirs);
  const auto o = normalized_chain(over, dirs);

  struct Facet {
    double nx, ny, px, py;
  };
  std::vector<Facet> facets;
  facets.push_back({0.0, 1.0, u.front().x, u.front().y});
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double dx = u[j + 1].x - u[j].x;
    const double dy = u[j + 1].y - u[j].y;
    const double len = std::hypot(dx, dy);
    facets.push_back({-dy / len, dx / len, u[j].x, u[j].y});
  }
  facets.push_back({1.0, 0.0, u.back().x, u.back().y});

  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_facet = 0;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    double gap = -std::numeric_limits<double>::infinity();
    for (const auto& v : o) {
      gap = std::max(gap, facets[f].nx * (v.x - facets[f].px) + facets[f].ny * (v.y - facets[f].py));
    }
    if (gap > best) {
      best = gap;
      best_facet = f;
    }
  }
  if (!(best > 1e-12)) return {0.5, 0.5};
  const double sum = facets[best_facet].nx + facets[best_facet].ny;
  return {facets[best_facet].nx / sum, facets[best_facet].ny / sum};
}

bool front_contains(const FrontApproximation& front, std::span<const double> point,
                    std::span<const Direction> dirs, double tol) {
  require_2d(dirs.size(), "front membership");
  if (front.empty()) return false;
  const auto p = normalize(point, dirs);
  const auto chain = normalized_chain(front, dirs);
  if (p[0] > chain.back().x + tol) return false;
  if (p[0] <= chain.front().x) return p[1] <= chain.front().y + tol;
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    if (p[0] <= chain[j + 1].x) {
      const double t = (p[0] - chain[j].x) / (chain[j + 1].x - chain[j].x);
      const double h = chain[j].y + t * (chain[j + 1].y - chain[j].y);
      return p[1] <= h + tol;
    }
  }
  // Within tol to the right of the last corner.
  return p[1] <= chain.back().y + tol;
}

bool is_inside(const FrontApproximation& candidate, const FrontApproximation& truth,
               std::span<const Direction> dirs, double tol) {
  return std::all_of(candidate.corners.begin(), candidate.corners.end(),
                     [&](const FrontCorner& c) { return front_contains(truth, c.point, dirs, tol); });
}

std::string to_string(FrontKind kind) { return kind == FrontKind::Under ? "under" : "over"; }

void write_front_csv(std::ostream& out, std::span<const FrontApproximation> fronts) {
  out << "dim1,dim2,kind,strategy_id\n";
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& f : fronts) {
    require_2d(f.dimension, "front CSV export");
    for (const auto& c : f.corners) {
      line << c.point[0] << ',' << c.point[1] << ',' << to_string(f.kind) << ',' << c.source.value << '\n';
    }
  }
  out << line.str();
}

std::vector<FrontApproximation> read_front_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "dim1,dim2,kind,strategy_id") {
    throw ConfigError("front CSV must start with header dim1,dim2,kind,strategy_id");
  }
  std::vector<FrontApproximation> fronts;
  std::string last_kind;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, kind, id;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, kind, ',') ||
        !std::getline(row, id)) {
      throw ConfigError("front CSV line " + std::to_string(line_no) + ": expected 4 fields");
    }
    if (kind != "under" && kind != "over" && kind != "exact") {
      throw ConfigError("front CSV line " + std::to_string(line_no) + ": unknown kind '" + kind + "'");
    }
    if (fronts.empty() || kind != last_kind) {
      fronts.push_back({kind == "over" ? FrontKind::Over : FrontKind::Under, 2, {}});
      last_kind = kind;
    }
    try {
      fronts.back().corners.push_back(
          {{std::stod(a), std::stod(b)}, StrategyId{static_cast<std::uint32_t>(std::stoul(id))}});
    } catch (const std::exception&) {
      throw ConfigError("front CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return fronts;
}

}  // namespace mosmc
