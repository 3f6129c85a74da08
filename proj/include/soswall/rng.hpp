#pragma once

#include <cstdint>

namespace soswall {

// Counter-based uniform stream (splitmix64 finalizer over seed + counter).
// Every draw is addressed by an absolute counter, so site updates within a
// sweep can be evaluated in any order, on any number of threads, and still
// consume exactly the same variates.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(mix(seed ^ kSeedTweak)) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(seed_ + (counter + 1) * kGamma);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_bits() { return bits(ctr_++); }
  double next_uniform() { return uniform(ctr_++); }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedTweak = 0x5851f42d4c957f2dULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t ctr_ = 0;
};

}  // namespace soswall
