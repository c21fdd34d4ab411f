#include "mosmc/heuristics.hpp"

#include <algorithm>

#include "mosmc/errors.hpp"

namespace mosmc {

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::Simple: return "simple";
    case Rule::FE: return "fe";
    case Rule::FFE: return "ffe";
    case Rule::FFW: return "ffw";
    case Rule::FFEO: return "ffeo";
    case Rule::CF: return "cf";
  }
  return "?";
}

Rule parse_rule(std::string_view name) {
  for (Rule r : kAllRules) {
    if (to_string(r) == name) return r;
  }
  throw ConfigError("unknown heuristic '" + std::string(name) + "' (expected simple, fe, ffe, ffw, ffeo or cf)");
}

bool excludes(Rule rule, const StrategyRecord& candidate, const StrategyRecord& witness,
              std::span<const Direction> dirs) {
  const auto& c = candidate.box.dims;
  const auto& w = witness.box.dims;
  if (c.size() != dirs.size() || w.size() != dirs.size()) {
    throw ConfigError("heuristic comparison across boxes of different dimension");
  }
  bool identical = true;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double gap = dirs[i] == Direction::Max ? w[i].mean - c[i].mean : c[i].mean - w[i].mean;
    const double ec = c[i].half_width();
    const double ew = w[i].half_width();
    double threshold = 0.0;
    switch (rule) {
      case Rule::Simple: threshold = 0.0; break;
      case Rule::FE: threshold = std::min(ec, ew); break;
      case Rule::FFE: threshold = ec; break;
      case Rule::FFW: threshold = ew; break;
      case Rule::FFEO: threshold = std::max(ec, ew); break;
      case Rule::CF: threshold = ec + ew; break;
    }
    if (!(gap >= threshold)) return false;
    if (c[i].mean != w[i].mean) identical = false;
  }
  return !identical || witness.id < candidate.id;
}

std::vector<StrategyId> select_candidates(Rule rule, const StrategyStats& stats,
                                          std::span<const Direction> dirs) {
  std::vector<StrategyId> all;
  all.reserve(stats.size());
  for (const auto& [id, rec] : stats) all.push_back(id);
  return select_candidates(rule, stats, all, dirs);
}

std::vector<StrategyId> select_candidates(Rule rule, const StrategyStats& stats,
                                          std::span<const StrategyId> among,
                                          std::span<const Direction> dirs) {
  std::vector<const StrategyRecord*> pop;
  pop.reserve(among.size());
  for (StrategyId id : among) {
    const auto it = stats.find(id);
    if (it == stats.end()) throw ConfigError("strategy " + std::to_string(id.value) + " has no statistics");
    pop.push_back(&it->second);
  }
  std::sort(pop.begin(), pop.end(), [](auto* a, auto* b) { return a->id < b->id; });
  pop.erase(std::unique(pop.begin(), pop.end()), pop.end());

  std::vector<StrategyId> survivors;
  for (const StrategyRecord* cand : pop) {
    const bool excluded = std::any_of(pop.begin(), pop.end(), [&](const StrategyRecord* wit) {
      return wit != cand && excludes(rule, *cand, *wit, dirs);
    });
    if (!excluded) survivors.push_back(cand->id);
  }
  return survivors;
}

}  // namespace mosmc
