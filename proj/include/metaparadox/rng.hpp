#pragma once

#include <cstdint>

#include "metaparadox/stats.hpp"

namespace metaparadox {

// Counter-based generator: every output is a stateless hash of
// (seed, replicate_index, counter), so a replicate's draws depend only on
// its own coordinates and parallel execution cannot reorder them.
class ReplicateRng {
 public:
  ReplicateRng(std::uint64_t seed, std::uint64_t replicate_index) noexcept
      : key_(mix64(mix64(seed + kGolden) ^
                   mix64(replicate_index * 0xA24BAED4963EE407ULL + 1))) {}

  std::uint64_t next_u64() noexcept {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  // Uniform on the open interval (0,1).
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal by inverse CDF; keeps the stream reproducible across
  // platforms, unlike std::normal_distribution.
  double next_normal() { return norm_quantile(Probability(next_uniform())); }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace metaparadox
