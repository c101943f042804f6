#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace shockrel {

/// SplitMix64 step; used to derive substream states from (root, index).
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Reproducible random stream identified by (root seed, stream index).
///
/// The generator is xoshiro256** whose 256-bit state is filled by SplitMix64
/// from a hash of both identifiers, so distinct index values give
/// decorrelated substreams and the same pair always yields the same sequence.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t root_seed, std::uint64_t stream_index) noexcept
      : root_seed_(root_seed), stream_index_(stream_index) {
    std::uint64_t mix = root_seed;
    const std::uint64_t root_hash = splitmix64(mix);
    std::uint64_t sm = root_hash ^ (stream_index * 0xD1B54A32D192ED03ULL);
    // one extra round so that neighbouring indices do not share prefixes
    sm = splitmix64(sm);
    for (auto& word : state_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in (0, 1); never returns 0 so log(u) is finite.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t root_seed() const noexcept { return root_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t root_seed_;
  std::uint64_t stream_index_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace shockrel
