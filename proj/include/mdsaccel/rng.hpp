#pragma once

#include <cstdint>

namespace mdsaccel {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen because the whole algorithm is
/// three lines, so any other implementation can reproduce the stream exactly:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform() maps the top 53 bits to [0, 1).
class SeededRng {
 public:
  explicit constexpr SeededRng(std::uint64_t seed) noexcept : state_(seed) {}

  /// Stream for one Monte Carlo trial: master seed XOR trial index.
  static constexpr SeededRng for_trial(std::uint64_t master_seed, std::uint64_t trial) noexcept {
    return SeededRng(master_seed ^ trial);
  }

  constexpr std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Integer in [0, bound) by multiply-shift of a 53-bit uniform; bound small.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
  }

 private:
  std::uint64_t state_;
};

}  // namespace mdsaccel
