#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mosmc/model_io.hpp"

namespace mosmc {

/// Manuscript example: init --write/stop--> paper --subm/arch--> done,
/// with query (Max recognition, Min effort) to {done}.
ModelFile model_mr();

/// Layered binary model of depth D (1..30): internal states 1..2^D-1 with
/// actions alpha (0.8 left, 0.2 right) and beta (0.1 left, 0.9 right),
/// finals 2^D..2^{D+1}-1. State s is stored at index s-1.
/// Queries: "tradeoff" (Max r1, Max r2 collected on entering a final) and
/// "reach" (Max P(left half of the finals), Max P(rightmost quarter)).
ModelFile gen_exponential(unsigned depth);

enum class DeepSeaVariant { Deterministic, Probabilistic };

struct DeepSeaGrid {
  /// Row of the treasure in each column (non-decreasing, >= 1).
  std::vector<unsigned> depths;
  /// Treasure value per column (strictly increasing).
  std::vector<double> values;

  /// 10-column grid with depths 1,2,3,4,4,4,7,7,9,10 and values 1..124.
  static DeepSeaGrid classic();
  /// 5 columns with depths 1..5 and values 3, 5, 6.5, 7.5, 8 (every treasure Pareto-optimal).
  static DeepSeaGrid small();
};

/// Submarine starting top-left; `down` and `right` moves cost 1 fuel,
/// entering a treasure cell collects it and ends the run. The probabilistic
/// variant implodes with `implode_p` when descending twice in a row.
/// Query: (Min fuel, Max treasure).
ModelFile gen_deep_sea(DeepSeaVariant variant, const DeepSeaGrid& grid = DeepSeaGrid::classic(),
                       double implode_p = 0.1);

/// ASCII racetrack: 's' start, 'f' finish, '.' track, 'x' puddle, '#' wall.
/// Lines starting with '@' set parameters (`@max_speed=2`, `@horizon=30`).
struct TrackMap {
  std::vector<std::string> rows;
  int max_speed = 2;
  unsigned horizon = 30;

  int width() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
  int height() const { return static_cast<int>(rows.size()); }
  char at(int x, int y) const { return rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]; }

  static TrackMap parse(std::string_view text);
  static TrackMap load(const std::string& path);
  /// Small built-in track with a puddle shortcut.
  static TrackMap builtin();
};

/// State (x, y, vx, vy, t); nine accelerations that succeed with probability
/// `success` and otherwise leave the velocity unchanged. Crossing a wall or
/// the border, or running out of time, leads to an absorbing fail state and
/// charges the remaining horizon as fuel. Query: (Min fuel, Min puddle) to
/// {finish, fail}.
ModelFile gen_racetrack_puddle(const TrackMap& track, double success = 0.9);

/// Resolves `mr`, `exponential[:depth=D]`,
/// `deep-sea[:variant=det|prob,grid=classic|small,depths=1/2/..,values=..,p=0.1]`,
/// `racetrack[:track=PATH,success=0.9,max_speed=2,horizon=30]`.
ModelFile generate(std::string_view spec);

}  // namespace mosmc
