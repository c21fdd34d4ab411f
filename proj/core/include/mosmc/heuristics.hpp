#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mosmc/mdp.hpp"
#include "mosmc/smc.hpp"

namespace mosmc {

/// Candidate selection rules, from weakest to most conservative exclusion.
enum class Rule { Simple, FE, FFE, FFW, FFEO, CF };

inline constexpr Rule kAllRules[] = {Rule::Simple, Rule::FE, Rule::FFE, Rule::FFW, Rule::FFEO, Rule::CF};

std::string to_string(Rule rule);
/// Accepts simple, fe, ffe, ffw, ffeo, cf.
Rule parse_rule(std::string_view name);

/// Whether `witness` excludes `candidate` under `rule`.
///
/// Per dimension the gap g = x̂(witness) − x̂(candidate) is taken in
/// normalized (all-maximize) space and compared against a threshold built
/// from the half-widths e_c, e_w of both boxes:
///   simple 0, fe min(e_c, e_w), ffe e_c, ffw e_w, ffeo max(e_c, e_w),
///   cf e_c + e_w.
/// The rule holds when g >= threshold in every dimension. If the two mean
/// vectors are identical the witness only excludes when its id is smaller.
bool excludes(Rule rule, const StrategyRecord& candidate, const StrategyRecord& witness,
              std::span<const Direction> dirs);

/// Survivors among all strategies in `stats`, witnesses ranging over all of
/// them. Returned in ascending id order.
std::vector<StrategyId> select_candidates(Rule rule, const StrategyStats& stats,
                                          std::span<const Direction> dirs);

/// Same, restricted to the sub-population `among` (candidates and
/// witnesses both drawn from it).
std::vector<StrategyId> select_candidates(Rule rule, const StrategyStats& stats,
                                          std::span<const StrategyId> among,
                                          std::span<const Direction> dirs);

}  // namespace mosmc
