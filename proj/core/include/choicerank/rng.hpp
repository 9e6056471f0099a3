#pragma once

#include <cstdint>
#include <random>

namespace choicerank {

/// SplitMix64 output function applied to `x`.
std::uint64_t splitmix64(std::uint64_t x);

/// Portable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; every derived variate is computed
/// here rather than through <random> distributions, whose algorithms are
/// implementation-defined. Output is therefore identical across platforms.
///
/// Stream splitting: stream k of seed s is seeded with
/// splitmix64(s ^ (k * 0x9E3779B97F4A7C15)), so trajectory k draws the same
/// numbers however trajectories are distributed over threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller (no cached second value).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace choicerank
