#pragma once

#include <cstdint>

namespace vbdf2 {

/// Seedable 64-bit generator with splitmix64 update. Output is identical on
/// every platform, which keeps randomized meshes and report tables
/// bit-reproducible; the standard-library distributions do not give that
/// guarantee.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in the open interval (0,1): 53 random bits offset by half
  /// an ulp, so neither endpoint is attainable.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform draw in (lo,hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Integer in [lo,hi] (inclusive); bias is negligible for desk-scale ranges.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// Derives a stream-specific seed so independent runs (one per table row,
/// one per mesh) never share a generator state.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (stream * 0x9e3779b97f4a7c15ULL));
  return g.next();
}

}  // namespace vbdf2
