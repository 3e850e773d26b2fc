#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace becsim {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits, independent of the
/// standard library's distribution internals.
inline double uniform_double(Rng& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

/// Exponential waiting time with the given rate.
inline double exponential(Rng& rng, double rate) {
  return -std::log1p(-uniform_double(rng)) / rate;
}

/// Per-trajectory seed: splitmix64 applied to master + (index+1) * golden
/// gamma (Steele et al. constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9,
/// 0x94D049BB133111EB). Fixed so that ensembles reproduce independently of
/// scheduling.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace becsim
