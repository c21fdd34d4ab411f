#include "mosmc/lss.hpp"

#include <array>

#include "mosmc/hash.hpp"

namespace mosmc {

std::uint64_t lss_hash(StrategyId sigma, StateIndex state) {
  std::array<std::uint8_t, 8> bytes{};
  for (int i = 0; i < 4; ++i) {
    bytes[i] = static_cast<std::uint8_t>(sigma.value >> (8 * i));
    bytes[4 + i] = static_cast<std::uint8_t>(state >> (8 * i));
  }
  return mix64(fnv1a64(bytes));
}

StrategyMap lss_strategy_map(const Mdp& model, StrategyId sigma) {
  StrategyMap map(model.num_states(), 0);
  for (StateIndex s = 0; s < model.num_states(); ++s) {
    const auto k = model.num_actions(s);
    map[s] = k <= 1 ? 0 : lss_action(sigma, s, k);
  }
  return map;
}

StrategySampler::StrategySampler(std::uint64_t seed, bool filter_duplicates)
    : state_(seed), filter_duplicates_(filter_duplicates) {}

StrategyId StrategySampler::next() {
  for (;;) {
    SplitMix64 gen(state_);
    const std::uint64_t word = gen.next();
    state_ = gen.state();
    const auto id = static_cast<std::uint32_t>(word >> 32);
    if (filter_duplicates_ && !seen_.insert(id).second) continue;
    ++emitted_;
    return StrategyId{id};
  }
}

std::vector<StrategyId> StrategySampler::sample(std::size_t count) {
  std::vector<StrategyId> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) ids.push_back(next());
  return ids;
}

}  // namespace mosmc
