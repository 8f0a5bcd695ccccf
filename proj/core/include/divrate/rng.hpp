#pragma once

#include <cstdint>

namespace divrate {

/// splitmix64 finalizer; bijective 64-bit mixing.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive a child seed from a parent seed and a stream index. Used for
/// counter-based substreams: the draws of substream i do not depend on how
/// many values other substreams consumed.
inline std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ (mix64(index) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

/// splitmix64 generator. Tiny state, passes BigCrush, and cheap enough to
/// instantiate once per draw.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace divrate
