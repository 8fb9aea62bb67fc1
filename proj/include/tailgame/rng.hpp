#pragma once

#include "tailgame/rational.hpp"

#include <cstdint>

namespace tailgame {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen because the output sequence is
// fully specified, so seeds reproduce across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

  // Uniform in [0, bound) for arbitrary-precision bounds.
  Integer below(const Integer& bound) {
    if (bound <= UINT64_MAX) return Integer(below(bound.convert_to<std::uint64_t>()));
    const unsigned bits = boost::multiprecision::msb(bound) + 1;
    for (;;) {
      Integer x = 0;
      for (unsigned have = 0; have < bits; have += 64) x = (x << 64) | next();
      x >>= ((bits + 63) / 64) * 64 - bits;
      if (x < bound) return x;
    }
  }

  // Bernoulli trial with exact rational success probability.
  bool chance(const Rational& p) {
    const Integer& den = boost::multiprecision::denominator(p);
    return below(den) < boost::multiprecision::numerator(p);
  }

 private:
  std::uint64_t state_;
};

// Seed of independent stream `index` under a master seed. Sample i of a batch
// always uses stream(seed, i), so results do not depend on worker count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64::mix(seed ^ SplitMix64::mix((index + 1) * SplitMix64::kGamma));
}

inline SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(derive_seed(seed, index));
}

}  // namespace tailgame
