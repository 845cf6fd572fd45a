#pragma once

#include <cstdint>

namespace levylap {

/// SplitMix64 (Steele, Lea, Flood 2014). Every random quantity in the library
/// is drawn from this generator so curve sets are reproducible bit for bit
/// from a single 64-bit seed, in any language that implements the same steps.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Independent stream for item `index` of a collection seeded by `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 root(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return SplitMix64(root.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace levylap
