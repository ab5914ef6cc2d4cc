#pragma once

#include <cstdint>
#include <random>

namespace sunsky {

/// Independent generator for one pixel, derived from (seed, pixel index) so
/// results do not depend on how pixels are scheduled across threads.
inline std::mt19937_64 pixel_rng(std::uint64_t seed, std::uint64_t pixel_index) {
  // splitmix64 finaliser over the combined key
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + pixel_index + 0x632BE59BD9B4E019ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

inline double uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 53>(rng); }

}  // namespace sunsky
