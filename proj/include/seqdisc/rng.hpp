#pragma once

#include <cstdint>

namespace seqdisc {

/// Counter-based generator: the n-th draw of stream (seed, stream, substream)
/// is a pure function of those four integers (SplitMix64 finalizer over a
/// keyed counter). Cheap to construct, so the simulator makes one per trial.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept
      : key_(mix(mix(seed ^ kSeedSalt) ^ mix(stream + kGamma) ^ mix(substream + 2 * kGamma + 1))) {}

  std::uint64_t next() noexcept { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5eedd15c5eedd15cULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace seqdisc
