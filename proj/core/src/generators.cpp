#include "mosmc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "mosmc/errors.hpp"

namespace mosmc {

namespace {

/// Adds a branch, merging duplicate targets.
void add_branch(std::vector<Branch>& branches, StateIndex target, double p) {
  for (auto& b : branches) {
    if (b.target == target) {
      b.probability += p;
      return;
    }
  }
  branches.push_back({target, p});
}

std::map<std::string, std::string> parse_args(std::string_view args, std::string_view generator) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < args.size()) {
    std::size_t end = args.find(',', pos);
    if (end == std::string_view::npos) end = args.size();
    const std::string_view item = args.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ConfigError(std::string(generator) + ": expected key=value, got '" + std::string(item) + "'");
    }
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    pos = end + 1;
  }
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + ": '" + s + "' is not a number");
  }
}

long to_long(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + ": '" + s + "' is not an integer");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

void reject_unknown(const std::map<std::string, std::string>& args, std::initializer_list<const char*> known,
                    std::string_view generator) {
  for (const auto& [k, v] : args) {
    if (std::none_of(known.begin(), known.end(), [&](const char* n) { return k == n; })) {
      throw ConfigError(std::string(generator) + ": unknown parameter '" + k + "'");
    }
  }
}

}  // namespace

ModelFile model_mr() {
  MdpBuilder b;
  const StateIndex init = b.add_state("init");
  const StateIndex paper = b.add_state("paper");
  const StateIndex done = b.add_state("done");
  b.declare_reward("rec");
  b.declare_reward("eff");
  const ActionIndex write = b.add_action(init, "write", {{paper, 0.85}, {done, 0.15}});
  b.add_action(init, "stop", {{done, 1.0}});
  b.add_reward("eff", init, write, paper, 10);
  b.add_reward("eff", init, write, done, 10);
  const ActionIndex subm = b.add_action(paper, "subm", {{done, 0.2}, {paper, 0.8}});
  const ActionIndex arch = b.add_action(paper, "arch", {{done, 1.0}});
  b.add_reward("rec", paper, subm, done, 4);
  b.add_reward("eff", paper, subm, done, 24);
  b.add_reward("eff", paper, subm, paper, 24);
  b.add_reward("rec", paper, arch, done, 1);
  b.add_action(done, "tau", {{done, 1.0}});
  b.set_initial(init);

  ModelFile f;
  f.model = b.build();
  MultiQuery q;
  q.name = "tradeoff";
  q.objectives.push_back({ObjectiveKind::ExpReward, Direction::Max, {done}, "rec", ValueBounds{0.0, 4.0}, "recognition"});
  q.objectives.push_back({ObjectiveKind::ExpReward, Direction::Min, {done}, "eff", std::nullopt, "effort"});
  f.queries.push_back(std::move(q));
  return f;
}

ModelFile gen_exponential(unsigned depth) {
  if (depth < 1 || depth > 30) throw ConfigError("exponential: depth must lie in [1, 30]");
  const std::uint64_t first_final = std::uint64_t{1} << depth;
  const std::uint64_t count = (first_final << 1) - 1;
  if (count > 5'000'000) throw ConfigError("exponential: depth " + std::to_string(depth) + " is too large to build");
  const double scale = static_cast<double>(first_final);
  const double half = static_cast<double>(first_final >> 1);

  MdpBuilder b;
  b.add_states(count);
  b.declare_reward("r1");
  b.declare_reward("r2");
  auto idx = [](std::uint64_t s) { return static_cast<StateIndex>(s - 1); };
  for (std::uint64_t s = 1; s <= count; ++s) {
    if (s >= first_final) {
      b.add_action(idx(s), "tau", {{idx(s), 1.0}});
      continue;
    }
    const StateIndex l = idx(2 * s);
    const StateIndex r = idx(2 * s + 1);
    const ActionIndex alpha = b.add_action(idx(s), "alpha", {{l, 0.8}, {r, 0.2}});
    const ActionIndex beta = b.add_action(idx(s), "beta", {{l, 0.1}, {r, 0.9}});
    if (2 * s >= first_final) {
      for (std::uint64_t sf : {2 * s, 2 * s + 1}) {
        const double v = static_cast<double>(sf);
        const double r1 = v / scale;
        const double r2 = 1.0 - std::pow((v - half) / scale, 2);
        for (ActionIndex a : {alpha, beta}) {
          b.add_reward("r1", idx(s), a, idx(sf), r1);
          b.add_reward("r2", idx(s), a, idx(sf), r2);
        }
      }
    }
  }
  b.set_initial(idx(1));

  ModelFile f;
  f.model = b.build();
  std::vector<StateIndex> finals;
  for (std::uint64_t s = first_final; s <= count; ++s) finals.push_back(idx(s));
  MultiQuery q;
  q.name = "tradeoff";
  q.objectives.push_back({ObjectiveKind::ExpReward, Direction::Max, finals, "r1", ValueBounds{1.0, 2.0}, "r1"});
  q.objectives.push_back({ObjectiveKind::ExpReward, Direction::Max, finals, "r2", ValueBounds{-1.25, 0.75}, "r2"});
  f.queries.push_back(std::move(q));

  std::vector<StateIndex> left, far_right;
  for (std::uint64_t s = first_final; s <= count; ++s) {
    if (s < first_final + first_final / 2) left.push_back(idx(s));
    if (s >= first_final + (3 * first_final) / 4) far_right.push_back(idx(s));
  }
  MultiQuery reach;
  reach.name = "reach";
  reach.objectives.push_back({ObjectiveKind::ProbReach, Direction::Max, left, "", std::nullopt, "left half"});
  reach.objectives.push_back({ObjectiveKind::ProbReach, Direction::Max, far_right, "", std::nullopt, "right quarter"});
  f.queries.push_back(std::move(reach));
  return f;
}

DeepSeaGrid DeepSeaGrid::classic() {
  return {{1, 2, 3, 4, 4, 4, 7, 7, 9, 10}, {1, 2, 3, 5, 8, 16, 24, 50, 74, 124}};
}

DeepSeaGrid DeepSeaGrid::small() { return {{1, 2, 3, 4, 5}, {3, 5, 6.5, 7.5, 8}}; }

ModelFile gen_deep_sea(DeepSeaVariant variant, const DeepSeaGrid& grid, double implode_p) {
  const std::size_t cols = grid.depths.size();
  if (cols == 0) throw ConfigError("deep-sea: grid needs at least one column");
  if (grid.values.size() != cols) throw ConfigError("deep-sea: need one treasure value per column");
  for (std::size_t c = 0; c < cols; ++c) {
    if (grid.depths[c] < 1) throw ConfigError("deep-sea: treasure depths must be at least 1");
    if (c > 0 && grid.depths[c] < grid.depths[c - 1]) throw ConfigError("deep-sea: depths must not decrease");
    if (c > 0 && !(grid.values[c] > grid.values[c - 1])) throw ConfigError("deep-sea: values must increase");
    if (!(grid.values[c] > 0.0)) throw ConfigError("deep-sea: values must be positive");
  }
  const bool prob = variant == DeepSeaVariant::Probabilistic;
  if (prob && !(implode_p > 0.0 && implode_p < 1.0)) throw ConfigError("deep-sea: p must lie in (0, 1)");

  MdpBuilder b;
  b.declare_reward("fuel");
  b.declare_reward("treasure");
  // Water cell (row, col, descended) -> state.
  std::map<std::tuple<unsigned, std::size_t, bool>, StateIndex> water;
  std::vector<StateIndex> treasure(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (unsigned r = 0; r < grid.depths[c]; ++r) {
      for (bool down : {false, true}) {
        if (down && (!prob || r == 0)) continue;
        water[{r, c, down}] = b.add_state("r" + std::to_string(r) + "c" + std::to_string(c) + (down ? "v" : ""));
      }
    }
  }
  for (std::size_t c = 0; c < cols; ++c) treasure[c] = b.add_state("treasure" + std::to_string(c));
  const StateIndex imploded = prob ? b.add_state("imploded") : 0;

  for (const auto& [key, s] : water) {
    const auto [r, c, descended] = key;
    // down
    const bool hits = r + 1 == grid.depths[c];
    const StateIndex below = hits ? treasure[c] : water.at({r + 1, c, prob});
    std::vector<Branch> down_branches;
    if (prob && descended) {
      down_branches = {{below, 1.0 - implode_p}, {imploded, implode_p}};
    } else {
      down_branches = {{below, 1.0}};
    }
    const ActionIndex a_down = b.add_action(s, "down", down_branches);
    for (const Branch& br : down_branches) b.add_reward("fuel", s, a_down, br.target, 1.0);
    if (hits) b.add_reward("treasure", s, a_down, treasure[c], grid.values[c]);
    // right
    if (c + 1 < cols) {
      const StateIndex next = water.at({r, c + 1, false});
      const ActionIndex a_right = b.add_action(s, "right", {{next, 1.0}});
      b.add_reward("fuel", s, a_right, next, 1.0);
    }
  }
  for (std::size_t c = 0; c < cols; ++c) b.add_action(treasure[c], "tau", {{treasure[c], 1.0}});
  if (prob) b.add_action(imploded, "tau", {{imploded, 1.0}});
  b.set_initial(water.at({0, 0, false}));

  ModelFile f;
  f.model = b.build();
  std::vector<StateIndex> goal(treasure.begin(), treasure.end());
  if (prob) goal.push_back(imploded);
  std::sort(goal.begin(), goal.end());
  double max_fuel = 0.0;
  for (std::size_t c = 0; c < cols; ++c) max_fuel = std::max(max_fuel, static_cast<double>(c + grid.depths[c]));
  MultiQuery q;
  q.name = "tradeoff";
  q.objectives.push_back({ObjectiveKind::ExpReward, Direction::Min, goal, "fuel", ValueBounds{1.0, max_fuel}, "fuel"});
  q.objectives.push_back(
      {ObjectiveKind::ExpReward, Direction::Max, goal, "treasure", ValueBounds{0.0, grid.values.back()}, "treasure"});
  f.queries.push_back(std::move(q));
  return f;
}

TrackMap TrackMap::parse(std::string_view text) {
  TrackMap t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '@') {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) throw ModelError("track line " + std::to_string(line_no) + ": expected @key=value");
      const std::string key = line.substr(1, eq - 1);
      const std::string val = line.substr(eq + 1);
      if (key == "max_speed") {
        t.max_speed = static_cast<int>(to_long(val, key));
      } else if (key == "horizon") {
        t.horizon = static_cast<unsigned>(to_long(val, key));
      } else {
        throw ModelError("track line " + std::to_string(line_no) + ": unknown directive '" + key + "'");
      }
      continue;
    }
    for (char ch : line) {
      if (std::string_view("sf.x#").find(ch) == std::string_view::npos) {
        throw ModelError("track line " + std::to_string(line_no) + ": unexpected character '" + std::string(1, ch) + "'");
      }
    }
    if (!t.rows.empty() && line.size() != t.rows.front().size()) {
      throw ModelError("track line " + std::to_string(line_no) + ": track is not rectangular");
    }
    t.rows.push_back(line);
  }
  if (t.rows.empty()) throw ModelError("track is empty");
  bool start = false;
  bool finish = false;
  for (const auto& r : t.rows) {
    start = start || r.find('s') != std::string::npos;
    finish = finish || r.find('f') != std::string::npos;
  }
  if (!start) throw ModelError("track has no start cell 's'");
  if (!finish) throw ModelError("track has no finish cell 'f'");
  if (t.max_speed < 1) throw ModelError("track max_speed must be at least 1");
  if (t.horizon < 1) throw ModelError("track horizon must be at least 1");
  return t;
}

TrackMap TrackMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open track file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

TrackMap TrackMap::builtin() {
  return parse(
      "@max_speed=1\n"
      "@horizon=12\n"
      "#######\n"
      "#s...f#\n"
      "#.xxx.#\n"
      "#.....#\n"
      "#######\n");
}

ModelFile gen_racetrack_puddle(const TrackMap& track, double success) {
  if (!(success > 0.0 && success <= 1.0)) throw ConfigError("racetrack: success probability must lie in (0, 1]");
  const int vmax = track.max_speed;
  const int horizon = static_cast<int>(track.horizon);

  using Key = std::tuple<int, int, int, int, int>;  // x, y, vx, vy, t
  std::map<Key, StateIndex> index;
  std::vector<Key> keys;
  MdpBuilder b;
  b.declare_reward("fuel");
  b.declare_reward("puddle");

  std::vector<Key> starts;
  for (int y = 0; y < track.height(); ++y) {
    for (int x = 0; x < track.width(); ++x) {
      if (track.at(x, y) == 's') starts.push_back({x, y, 0, 0, 0});
    }
  }
  const bool multi = starts.size() > 1;
  const StateIndex begin = multi ? b.add_state("begin") : 0;
  const StateIndex finish = b.add_state("finish");
  const StateIndex fail = b.add_state("fail");
  auto state_of = [&](const Key& k) {
    const auto it = index.find(k);
    if (it != index.end()) return it->second;
    const auto [x, y, vx, vy, t] = k;
    const StateIndex s = b.add_state(std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(vx) + "," +
                                     std::to_string(vy) + "," + std::to_string(t));
    index.emplace(k, s);
    keys.push_back(k);
    return s;
  };
  for (const Key& k : starts) state_of(k);

  // Outcome of moving from (x, y) with velocity (vx, vy): 0 = moving on,
  // 1 = finish crossed, 2 = crash.
  auto move = [&](int x, int y, int vx, int vy) {
    const int steps = std::max(std::abs(vx), std::abs(vy));
    for (int i = 1; i <= steps; ++i) {
      const int cx = x + static_cast<int>(std::lround(static_cast<double>(i * vx) / steps));
      const int cy = y + static_cast<int>(std::lround(static_cast<double>(i * vy) / steps));
      if (cx < 0 || cy < 0 || cx >= track.width() || cy >= track.height()) return 2;
      const char c = track.at(cx, cy);
      if (c == '#') return 2;
      if (c == 'f') return 1;
    }
    return 0;
  };

  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto [x, y, vx, vy, t] = keys[i];
    const StateIndex s = index.at(keys[i]);
    for (int ay = -1; ay <= 1; ++ay) {
      for (int ax = -1; ax <= 1; ++ax) {
        struct Outcome {
          StateIndex target;
          double p;
          double fuel;
          double puddle;
        };
        std::vector<Outcome> outs;
        auto resolve = [&](int nvx, int nvy, double p) {
          const int r = move(x, y, nvx, nvy);
          if (r == 1) {
            outs.push_back({finish, p, 1.0, 0.0});
          } else if (r == 2 || t + 1 >= horizon) {
            outs.push_back({fail, p, static_cast<double>(horizon - t), 0.0});
          } else {
            const int nx = x + nvx;
            const int ny = y + nvy;
            const StateIndex target = state_of({nx, ny, nvx, nvy, t + 1});
            outs.push_back({target, p, 1.0, track.at(nx, ny) == 'x' ? 1.0 : 0.0});
          }
        };
        const int nvx = std::clamp(vx + ax, -vmax, vmax);
        const int nvy = std::clamp(vy + ay, -vmax, vmax);
        resolve(nvx, nvy, success);
        if (success < 1.0) resolve(vx, vy, 1.0 - success);
        std::vector<Branch> branches;
        for (const auto& o : outs) add_branch(branches, o.target, o.p);
        const ActionIndex a = b.add_action(s, "a" + std::to_string(ax) + std::to_string(ay), branches);
        for (const auto& o : outs) {
          b.add_reward("fuel", s, a, o.target, o.fuel);
          if (o.puddle != 0.0) b.add_reward("puddle", s, a, o.target, o.puddle);
        }
      }
    }
  }
  b.add_action(finish, "tau", {{finish, 1.0}});
  b.add_action(fail, "tau", {{fail, 1.0}});
  if (multi) {
    std::vector<Branch> branches;
    for (const Key& k : starts) branches.push_back({index.at(k), 1.0 / static_cast<double>(starts.size())});
    b.add_action(begin, "start", branches);
    b.set_initial(begin);
  } else {
    b.set_initial(index.at(starts.front()));
  }

  ModelFile f;
  f.model = b.build();
  const std::vector<StateIndex> goal{std::min(finish, fail), std::max(finish, fail)};
  const double h = static_cast<double>(horizon);
  MultiQuery q;
  q.name = "tradeoff";
  q.objectives.push_back({ObjectiveKind::ExpReward, Direction::Min, goal, "fuel", ValueBounds{1.0, h}, "fuel"});
  q.objectives.push_back({ObjectiveKind::ExpReward, Direction::Min, goal, "puddle", ValueBounds{0.0, h}, "puddle"});
  f.queries.push_back(std::move(q));
  return f;
}

ModelFile generate(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const auto args = parse_args(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1), name);
  if (name == "mr") {
    reject_unknown(args, {}, name);
    return model_mr();
  }
  if (name == "exponential") {
    reject_unknown(args, {"depth"}, name);
    const long d = args.count("depth") ? to_long(args.at("depth"), "depth") : 3;
    if (d < 1 || d > 30) throw ConfigError("exponential: depth must lie in [1, 30]");
    return gen_exponential(static_cast<unsigned>(d));
  }
  if (name == "deep-sea") {
    reject_unknown(args, {"variant", "grid", "depths", "values", "p"}, name);
    DeepSeaVariant variant = DeepSeaVariant::Deterministic;
    if (args.count("variant")) {
      const std::string& v = args.at("variant");
      if (v == "det") {
        variant = DeepSeaVariant::Deterministic;
      } else if (v == "prob") {
        variant = DeepSeaVariant::Probabilistic;
      } else {
        throw ConfigError("deep-sea: variant must be det or prob");
      }
    }
    DeepSeaGrid grid = DeepSeaGrid::classic();
    if (args.count("grid")) {
      const std::string& g = args.at("grid");
      if (g == "classic") {
        grid = DeepSeaGrid::classic();
      } else if (g == "small") {
        grid = DeepSeaGrid::small();
      } else {
        throw ConfigError("deep-sea: grid must be classic or small");
      }
    }
    if (args.count("depths")) {
      grid.depths.clear();
      for (const auto& s : split(args.at("depths"), '/')) {
        const long d = to_long(s, "depths");
        if (d < 1) throw ConfigError("deep-sea: depths must be at least 1");
        grid.depths.push_back(static_cast<unsigned>(d));
      }
    }
    if (args.count("values")) {
      grid.values.clear();
      for (const auto& s : split(args.at("values"), '/')) grid.values.push_back(to_double(s, "values"));
    }
    const double p = args.count("p") ? to_double(args.at("p"), "p") : 0.1;
    return gen_deep_sea(variant, grid, p);
  }
  if (name == "racetrack") {
    reject_unknown(args, {"track", "success", "max_speed", "horizon"}, name);
    TrackMap t = args.count("track") ? TrackMap::load(args.at("track")) : TrackMap::builtin();
    if (args.count("max_speed")) t.max_speed = static_cast<int>(to_long(args.at("max_speed"), "max_speed"));
    if (args.count("horizon")) t.horizon = static_cast<unsigned>(to_long(args.at("horizon"), "horizon"));
    if (t.max_speed < 1 || t.horizon < 1) throw ConfigError("racetrack: max_speed and horizon must be positive");
    const double success = args.count("success") ? to_double(args.at("success"), "success") : 0.9;
    return gen_racetrack_puddle(t, success);
  }
  throw ConfigError("unknown generator '" + std::string(name) + "' (expected mr, exponential, deep-sea or racetrack)");
}

}  // namespace mosmc
