#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "mosmc/mdp.hpp"

namespace mosmc {

/// Opaque 32-bit identifier of a deterministic memoryless strategy.
struct StrategyId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const StrategyId&) const = default;
};

/// H(sigma . state): FNV-1a 64 over the little-endian 4-byte encodings of
/// sigma then state, followed by mix64.
std::uint64_t lss_hash(StrategyId sigma, StateIndex state);

/// Action chosen by strategy sigma in a state with k enabled actions.
inline ActionIndex lss_action(StrategyId sigma, StateIndex state, std::uint32_t k) {
  return static_cast<ActionIndex>(lss_hash(sigma, state) % k);
}

/// Action chooser for the simulator backed by an LSS identifier.
struct LssChooser {
  StrategyId id;

  ActionIndex operator()(StateIndex s, std::uint32_t k) const { return lss_action(id, s, k); }
};

/// Per-state action map that strategy sigma induces on a model.
StrategyMap lss_strategy_map(const Mdp& model, StrategyId sigma);

/// Draws strategy identifiers from a seeded SplitMix64 stream (high 32 bits
/// of each output). With the duplicate filter on, an identifier is never
/// emitted twice by the same sampler.
class StrategySampler {
 public:
  explicit StrategySampler(std::uint64_t seed, bool filter_duplicates = true);

  StrategyId next();
  std::vector<StrategyId> sample(std::size_t count);

  std::size_t emitted() const { return emitted_; }

 private:
  std::uint64_t state_;
  bool filter_duplicates_;
  std::size_t emitted_ = 0;
  std::unordered_set<std::uint32_t> seen_;
};

}  // namespace mosmc

template <>
struct std::hash<mosmc::StrategyId> {
  std::size_t operator()(mosmc::StrategyId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
