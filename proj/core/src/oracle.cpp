#include "mosmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mosmc/errors.hpp"

namespace mosmc {

namespace {

std::vector<char> goal_mask(const Mdp& model, const Objective& o) {
  std::vector<char> g(model.num_states(), 0);
  for (StateIndex s : o.goal) {
    if (s >= model.num_states()) throw ModelError("goal state " + std::to_string(s) + " out of range");
    g[s] = 1;
  }
  return g;
}

std::span<const double> reward_span(const Mdp& model, const Objective& o) {
  const auto r = model.find_reward(o.reward);
  if (!r) throw ModelError("unknown reward structure '" + o.reward + "'");
  return model.branch_rewards(*r);
}

/// Topological order of `nodes` under `succ` restricted to `nodes`; empty
/// optional-like flag when a cycle exists.
bool topological_order(const std::vector<StateIndex>& nodes, const std::vector<std::vector<StateIndex>>& succ,
                       const std::vector<std::int64_t>& local, std::vector<std::size_t>& order) {
  const std::size_t k = nodes.size();
  std::vector<std::size_t> indeg(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (StateIndex t : succ[i]) {
      if (local[t] >= 0) ++indeg[static_cast<std::size_t>(local[t])];
    }
  }
  order.clear();
  std::vector<std::size_t> stack;
  for (std::size_t i = k; i-- > 0;) {
    if (indeg[i] == 0) stack.push_back(i);
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    order.push_back(i);
    for (StateIndex t : succ[i]) {
      if (local[t] < 0) continue;
      if (--indeg[static_cast<std::size_t>(local[t])] == 0) stack.push_back(static_cast<std::size_t>(local[t]));
    }
  }
  return order.size() == k;
}

/// Solves (I - P) x = b densely with partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  const auto a0 = a;
  const auto b0 = b;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-300) throw ModelError("singular linear system in exact evaluation");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(b0[i]), std::abs(x[i])});
  for (std::size_t i = 0; i < n; ++i) {
    double r = -b0[i];
    for (std::size_t c = 0; c < n; ++c) r += a0[i][c] * x[c];
    if (std::abs(r) > 1e-12 * scale * static_cast<double>(n)) {
      throw ModelError("exact evaluation is ill-conditioned (residual " + std::to_string(r) + ")");
    }
  }
  return x;
}

}  // namespace

std::uint64_t count_strategies(const Mdp& model, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (StateIndex s = 0; s < model.num_states(); ++s) {
    const std::uint64_t k = model.num_actions(s);
    if (k == 0) continue;
    if (count > cap / k) {
      throw ConfigError("more than " + std::to_string(cap) +
                        " deterministic strategies; use a smaller model or raise the enumeration cap");
    }
    count *= k;
  }
  return count;
}

void enumerate_strategies(const Mdp& model, const std::function<bool(const StrategyMap&)>& visit,
                          std::uint64_t cap) {
  count_strategies(model, cap);
  const std::size_t n = model.num_states();
  StrategyMap map(n, 0);
  while (true) {
    if (!visit(map)) return;
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (map[i] + 1 < model.num_actions(static_cast<StateIndex>(i))) {
        ++map[i];
        break;
      }
      map[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

double exact_value(const Mdp& model, std::span<const ActionIndex> strategy, const Objective& objective) {
  const std::size_t n = model.num_states();
  if (strategy.size() != n) throw ConfigError("strategy map has the wrong number of states");
  const auto goal = goal_mask(model, objective);
  const bool reward = objective.kind == ObjectiveKind::ExpReward;
  const std::span<const double> rew = reward ? reward_span(model, objective) : std::span<const double>{};
  const StateIndex init = model.initial_state();
  if (goal[init]) return reward ? 0.0 : 1.0;

  // Non-goal states reachable under the strategy.
  std::vector<std::int64_t> local(n, -1);
  std::vector<StateIndex> nodes{init};
  local[init] = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const StateIndex s = nodes[i];
    if (strategy[s] >= model.num_actions(s)) {
      throw ConfigError("strategy chooses action " + std::to_string(strategy[s]) + " in state " +
                        model.state_name(s));
    }
    for (const Branch& b : model.branches(s, strategy[s])) {
      if (!goal[b.target] && local[b.target] < 0) {
        local[b.target] = static_cast<std::int64_t>(nodes.size());
        nodes.push_back(b.target);
      }
    }
  }
  const std::size_t k = nodes.size();
  std::vector<std::vector<StateIndex>> succ(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (const Branch& b : model.branches(nodes[i], strategy[nodes[i]])) succ[i].push_back(b.target);
  }

  // Which of them can still reach the goal.
  std::vector<std::vector<std::size_t>> pred(k);
  std::vector<char> reaches(k, 0);
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < k; ++i) {
    for (StateIndex t : succ[i]) {
      if (goal[t]) {
        if (!reaches[i]) {
          reaches[i] = 1;
          work.push_back(i);
        }
      } else {
        pred[static_cast<std::size_t>(local[t])].push_back(i);
      }
    }
  }
  while (!work.empty()) {
    const std::size_t i = work.back();
    work.pop_back();
    for (std::size_t p : pred[i]) {
      if (!reaches[p]) {
        reaches[p] = 1;
        work.push_back(p);
      }
    }
  }
  if (reward) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!reaches[i]) {
        throw ModelError("objective '" + objective.label + "': state " + model.state_name(nodes[i]) +
                         " is reachable but cannot reach the goal, so the expected reward is undefined");
      }
    }
  }
  if (!reaches[0]) return 0.0;

  // Restrict unknowns to states that reach the goal; others are 0.
  std::vector<StateIndex> vars;
  std::vector<std::int64_t> var_of(n, -1);
  for (std::size_t i = 0; i < k; ++i) {
    if (reaches[i]) {
      var_of[nodes[i]] = static_cast<std::int64_t>(vars.size());
      vars.push_back(nodes[i]);
    }
  }
  const std::size_t v = vars.size();
  std::vector<double> rhs(v, 0.0);
  std::vector<std::vector<std::pair<std::size_t, double>>> coeff(v);
  std::vector<std::vector<StateIndex>> vsucc(v);
  for (std::size_t i = 0; i < v; ++i) {
    const StateIndex s = vars[i];
    const std::size_t base = model.branch_begin(s, strategy[s]);
    const auto bs = model.branches(s, strategy[s]);
    for (std::size_t j = 0; j < bs.size(); ++j) {
      const Branch& b = bs[j];
      if (reward) rhs[i] += b.probability * rew[base + j];
      if (goal[b.target]) {
        if (!reward) rhs[i] += b.probability;
      } else if (var_of[b.target] >= 0) {
        coeff[i].emplace_back(static_cast<std::size_t>(var_of[b.target]), b.probability);
        vsucc[i].push_back(b.target);
      }
    }
  }

  std::vector<std::size_t> order;
  std::vector<double> x(v, 0.0);
  if (topological_order(vars, vsucc, var_of, order)) {
    for (std::size_t idx = order.size(); idx-- > 0;) {
      const std::size_t i = order[idx];
      double val = rhs[i];
      for (const auto& [j, p] : coeff[i]) val += p * x[j];
      x[i] = val;
    }
  } else {
    std::vector<std::vector<double>> a(v, std::vector<double>(v, 0.0));
    for (std::size_t i = 0; i < v; ++i) {
      a[i][i] += 1.0;
      for (const auto& [j, p] : coeff[i]) a[i][j] -= p;
    }
    x = solve_dense(std::move(a), rhs);
  }
  return x[static_cast<std::size_t>(var_of[init])];
}

std::vector<double> exact_values(const Mdp& model, std::span<const ActionIndex> strategy,
                                 const MultiQuery& query) {
  std::vector<double> out;
  out.reserve(query.dimension());
  for (const Objective& o : query.objectives) out.push_back(exact_value(model, strategy, o));
  return out;
}

std::string to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::Auto: return "auto";
    case OracleMethod::Enumerate: return "enumerate";
    case OracleMethod::WeightedSum: return "dp";
  }
  return "?";
}

OracleMethod parse_oracle_method(std::string_view name) {
  for (OracleMethod m : {OracleMethod::Auto, OracleMethod::Enumerate, OracleMethod::WeightedSum}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown oracle method '" + std::string(name) + "' (expected auto, enumerate or dp)");
}

bool weighted_sum_applicable(const Mdp& model, const MultiQuery& query, std::string* reason) {
  auto fail = [&](std::string why) {
    if (reason) *reason = std::move(why);
    return false;
  };
  if (query.dimension() != 2) return fail("needs exactly 2 objectives");
  std::set<StateIndex> g0(query.objectives[0].goal.begin(), query.objectives[0].goal.end());
  std::set<StateIndex> g1(query.objectives[1].goal.begin(), query.objectives[1].goal.end());
  if (g0 != g1) return fail("objectives have different goal sets");
  const auto goal = goal_mask(model, query.objectives[0]);
  const std::size_t n = model.num_states();
  std::vector<std::int64_t> local(n, -1);
  std::vector<StateIndex> nodes;
  if (!goal[model.initial_state()]) {
    nodes.push_back(model.initial_state());
    local[model.initial_state()] = 0;
  }
  std::vector<std::vector<StateIndex>> succ;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const StateIndex s = nodes[i];
    succ.emplace_back();
    for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
      for (const Branch& b : model.branches(s, a)) {
        if (goal[b.target]) continue;
        succ[i].push_back(b.target);
        if (local[b.target] < 0) {
          local[b.target] = static_cast<std::int64_t>(nodes.size());
          nodes.push_back(b.target);
        }
      }
    }
  }
  std::vector<std::size_t> order;
  if (!topological_order(nodes, succ, local, order)) return fail("non-goal part of the model has a cycle");
  return true;
}

ExactPoint optimize_weighted(const Mdp& model, const MultiQuery& query, std::span<const double> w,
                             std::span<const double> tiebreak) {
  std::string why;
  if (!weighted_sum_applicable(model, query, &why)) throw ConfigError("weighted-sum oracle: " + why);
  const std::size_t d = query.dimension();
  const auto dirs = query.directions();
  const auto goal = goal_mask(model, query.objectives[0]);
  std::vector<std::span<const double>> rew(d);
  std::vector<double> on_goal(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (query.objectives[i].kind == ObjectiveKind::ExpReward) {
      rew[i] = reward_span(model, query.objectives[i]);
    } else {
      on_goal[i] = 1.0;
    }
  }
  const std::size_t n = model.num_states();
  ExactPoint out;
  out.strategy.assign(n, 0);
  const StateIndex init = model.initial_state();
  if (goal[init]) {
    out.value = on_goal;
    return out;
  }

  std::vector<std::int64_t> local(n, -1);
  std::vector<StateIndex> nodes{init};
  local[init] = 0;
  std::vector<std::vector<StateIndex>> succ;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    succ.emplace_back();
    for (ActionIndex a = 0; a < model.num_actions(nodes[i]); ++a) {
      for (const Branch& b : model.branches(nodes[i], a)) {
        if (goal[b.target]) continue;
        succ[i].push_back(b.target);
        if (local[b.target] < 0) {
          local[b.target] = static_cast<std::int64_t>(nodes.size());
          nodes.push_back(b.target);
        }
      }
    }
  }
  std::vector<std::size_t> order;
  topological_order(nodes, succ, local, order);

  auto score = [&](const std::vector<double>& v, std::span<const double> weights) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += weights[i] * (dirs[i] == Direction::Max ? v[i] : -v[i]);
    return s;
  };
  std::vector<std::vector<double>> value(nodes.size());
  for (std::size_t idx = order.size(); idx-- > 0;) {
    const std::size_t i = order[idx];
    const StateIndex s = nodes[i];
    std::vector<double> best;
    double best_p = 0.0;
    double best_t = 0.0;
    for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
      std::vector<double> q(d, 0.0);
      const std::size_t base = model.branch_begin(s, a);
      const auto bs = model.branches(s, a);
      for (std::size_t j = 0; j < bs.size(); ++j) {
        const Branch& b = bs[j];
        for (std::size_t k = 0; k < d; ++k) {
          double v = rew[k].empty() ? 0.0 : rew[k][base + j];
          v += goal[b.target] ? on_goal[k] : value[static_cast<std::size_t>(local[b.target])][k];
          q[k] += b.probability * v;
        }
      }
      const double p = score(q, w);
      const double t = score(q, tiebreak);
      const double tol = 1e-12 * std::max({1.0, std::abs(p), std::abs(best_p)});
      if (best.empty() || p > best_p + tol || (std::abs(p - best_p) <= tol && t > best_t + tol)) {
        best = std::move(q);
        best_p = p;
        best_t = t;
        out.strategy[s] = a;
      }
    }
    value[i] = std::move(best);
  }
  out.value = value[0];
  return out;
}

ExactFront exact_pareto_front(const Mdp& model, const MultiQuery& query, const OracleOptions& options) {
  const auto dirs = query.directions();
  OracleMethod method = options.method;
  if (method == OracleMethod::Auto) {
    method = weighted_sum_applicable(model, query) ? OracleMethod::WeightedSum : OracleMethod::Enumerate;
  }
  ExactFront front;
  front.method = method;
  std::vector<ExactPoint> found;

  if (method == OracleMethod::WeightedSum) {
    const double tol = 1e-10;
    auto norm = [&](const ExactPoint& p) { return normalize(p.value, dirs); };
    ExactPoint top = optimize_weighted(model, query, std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 0.0});
    ExactPoint right = optimize_weighted(model, query, std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0});
    front.evaluated = 2;
    found.push_back(top);
    const auto nt = norm(top);
    const auto nr = norm(right);
    if (std::abs(nt[0] - nr[0]) > tol || std::abs(nt[1] - nr[1]) > tol) {
      found.push_back(right);
      // Dichotomic search between consecutive known hull vertices.
      std::vector<std::pair<ExactPoint, ExactPoint>> work{{top, right}};
      while (!work.empty()) {
        auto [p, q] = work.back();
        work.pop_back();
        const auto np = norm(p);
        const auto nq = norm(q);
        std::vector<double> w{np[1] - nq[1], nq[0] - np[0]};
        const double sum = w[0] + w[1];
        if (!(sum > 0.0)) continue;
        w[0] /= sum;
        w[1] /= sum;
        ExactPoint r = optimize_weighted(model, query, w, std::vector<double>{1.0, 0.0});
        ++front.evaluated;
        const auto nr2 = norm(r);
        const double gain = w[0] * (nr2[0] - np[0]) + w[1] * (nr2[1] - np[1]);
        if (gain > tol * std::max({1.0, std::abs(np[0]), std::abs(np[1])})) {
          found.push_back(r);
          work.emplace_back(p, r);
          work.emplace_back(r, q);
        }
      }
    }
    for (std::size_t i = 0; i < found.size(); ++i) found[i].rank = i;
  } else {
    // Reachable-scope enumeration: decide actions in discovery order, only
    // for states that the partial strategy reaches.
    std::vector<char> stop(model.num_states(), 1);
    for (const Objective& o : query.objectives) {
      const auto g = goal_mask(model, o);
      for (std::size_t s = 0; s < g.size(); ++s) stop[s] = stop[s] && g[s];
    }
    const std::size_t n = model.num_states();
    StrategyMap map(n, 0);
    std::vector<char> reached(n, 0);
    std::vector<StateIndex> queue;
    std::uint64_t rank = 0;

    auto discover = [&](StateIndex s) {
      if (!reached[s]) {
        reached[s] = 1;
        queue.push_back(s);
      }
    };
    std::function<void(std::size_t)> dfs = [&](std::size_t ptr) {
      // Walk over states that need no decision.
      while (ptr < queue.size()) {
        const StateIndex s = queue[ptr];
        if (!stop[s] && model.num_actions(s) != 1) break;
        if (!stop[s]) {
          map[s] = 0;
          for (const Branch& b : model.branches(s, 0)) discover(b.target);
        }
        ++ptr;
      }
      if (ptr == queue.size()) {
        if (rank >= options.cap) {
          throw ConfigError("more than " + std::to_string(options.cap) +
                            " relevant deterministic strategies; use a smaller model, the dp method, or a "
                            "larger enumeration cap");
        }
        StrategyMap witness(n, 0);
        for (StateIndex s : queue) witness[s] = map[s];
        ExactPoint p{exact_values(model, witness, query), std::move(witness), rank++};
        found.push_back(std::move(p));
        return;
      }
      const StateIndex s = queue[ptr];
      for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
        const std::size_t before = queue.size();
        map[s] = a;
        for (const Branch& b : model.branches(s, a)) discover(b.target);
        dfs(ptr + 1);
        while (queue.size() > before) {
          reached[queue.back()] = 0;
          queue.pop_back();
        }
      }
    };
    discover(model.initial_state());
    dfs(0);
    front.evaluated = rank;
    if (options.keep_points) front.points = found;
  }

  // Pareto-relevant corners.
  if (query.dimension() == 2) {
    std::vector<FrontCorner> pts;
    pts.reserve(found.size());
    for (const auto& p : found) pts.push_back({p.value, StrategyId{static_cast<std::uint32_t>(p.rank)}});
    front.hull = convex_front(std::move(pts), dirs, FrontKind::Under);
    std::map<std::uint64_t, const ExactPoint*> by_rank;
    for (const auto& p : found) by_rank[p.rank] = &p;
    for (const auto& c : front.hull.corners) front.corners.push_back(*by_rank.at(c.source.value));
  } else {
    for (std::size_t i = 0; i < found.size(); ++i) {
      const auto ni = normalize(found[i].value, dirs);
      bool dominated = false;
      for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
        if (i == j) continue;
        const auto nj = normalize(found[j].value, dirs);
        bool weak = true;
        bool equal = true;
        for (std::size_t k = 0; k < ni.size(); ++k) {
          if (nj[k] < ni[k]) weak = false;
          if (nj[k] != ni[k]) equal = false;
        }
        dominated = weak && (!equal || j < i);
      }
      if (!dominated) front.corners.push_back(found[i]);
    }
  }
  return front;
}

}  // namespace mosmc
