#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace wholm {

/// Seeded generator with a platform-independent stream.
///
/// std::mt19937_64 is bit-specified by the standard; the standard library
/// distributions are not, so uniform and normal variates are derived here
/// from raw 64-bit outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for (seed, stream index), e.g. one per replicate.
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  /// [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Marsaglia polar method; the second variate is cached).
  double normal();

  /// Uniform integer in [0, n), n >= 1, without modulo bias.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finaliser, used to decorrelate user seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace wholm
