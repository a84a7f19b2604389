#pragma once

#include <cstdint>
#include <random>

namespace infcartel {

/// Seedable random stream. Every consumer receives one explicitly; there is
/// no global generator. `split(i)` derives an independent child stream so
/// that replication `i` draws the same numbers regardless of thread layout.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  /// Uniform double on [0, 1) built from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). Lemire-style rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (one value per call, no caching, so the
  /// stream position depends only on the number of calls).
  double normal();

  std::uint64_t next_u64() { return engine_(); }

  RandomStream split(std::uint64_t index) const {
    return RandomStream(mix(seed_ ^ mix(index + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace infcartel
