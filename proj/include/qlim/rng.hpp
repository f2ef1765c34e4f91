#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based random streams: sample i is a pure function of (seed, i), so
// a run split across any number of workers merges to the same values as a
// serial run with the same seed.
namespace qlim::rng {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// uniform in (0, 1), exclusive at both ends
inline double uniform01(uint64_t seed, uint64_t counter) {
  const uint64_t base = splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
  const uint64_t v = splitmix64(base + 0x9E3779B97F4A7C15ULL * counter);
  return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
}

// one standard normal per counter (Box-Muller, cosine branch)
inline double normal(uint64_t seed, uint64_t counter) {
  const double u1 = uniform01(seed, 2 * counter);
  const double u2 = uniform01(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qlim::rng
