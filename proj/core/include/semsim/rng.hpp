#pragma once

#include <cstdint>

namespace semsim {

/// SplitMix64 (Steele, Lea & Flood 2014). The whole state is one 64-bit word,
/// so every seed reproduces bit-for-bit in any language with 64-bit unsigned
/// wrap-around arithmetic:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  /// Uniform integer in [0, bound) by rejection: draws below (2^64 - bound) mod bound
  /// are discarded, the first accepted draw r yields r mod bound. bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace semsim
