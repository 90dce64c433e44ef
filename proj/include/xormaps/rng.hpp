#pragma once

#include <cstdint>

namespace xormaps {

// splitmix64 finalizer; the documented seed policy builds seed i from a base
// seed as mix64(base + (i+1) * golden_gamma). Constants are the standard
// splitmix64 ones and are part of the reproducibility contract (see README).
inline constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// The i-th derived 64-bit stream value for a base seed.
inline std::uint64_t seed_stream(std::uint64_t base, std::uint64_t i) {
  return mix64(base + (i + 1) * kSplitmixGamma);
}

// Uniform double in [0, 1) with 53 random bits.
inline double u01(std::uint64_t z) {
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Seed i in [0,1) for a base seed — the orbit-seed policy used everywhere.
inline double orbit_seed(std::uint64_t base, std::uint64_t i) {
  return u01(seed_stream(base, i));
}

}  // namespace xormaps
