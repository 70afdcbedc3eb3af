#pragma once

// Seedable 64-bit generators: splitmix64 for seeding and stream derivation,
// xoshiro256** for sampling. Uniforms are 53-bit dyadics k / 2^53.

#include <cstdint>

namespace permfix {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t rotl64(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }
  /// Independent stream for (seed, index): the index is hashed into the seed.
  static Xoshiro256ss stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 h(index ^ 0xD1B54A32D192ED03ULL);
    return Xoshiro256ss(seed ^ h.next());
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }

  result_type operator()() {
    const std::uint64_t result = rotl64(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl64(s_[3], 45);
    return result;
  }

  /// k in [0, 2^53); the uniform is k / 2^53.
  std::uint64_t next53() { return (*this)() >> 11; }
  double uniform() { return static_cast<double>(next53()) * 0x1.0p-53; }

  const std::uint64_t* state() const { return s_; }

 private:
  std::uint64_t s_[4];
};

}  // namespace permfix
