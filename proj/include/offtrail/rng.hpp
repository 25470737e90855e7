#pragma once

#include <cstdint>
#include <random>

namespace offtrail {

// splitmix64, used both as a hash mixer and to seed engines.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
  return mix64(seed ^ mix64(v));
}

// Uniform double in [0, 1). Avoids std::uniform_real_distribution so the
// byte stream is identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
  return uniform01(rng) < p;
}

// size must be > 0.
inline size_t uniform_index(std::mt19937_64& rng, size_t size) {
  return static_cast<size_t>(uniform01(rng) * static_cast<double>(size));
}

}  // namespace offtrail
