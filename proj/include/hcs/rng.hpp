#pragma once

#include <cstdint>
#include <random>

namespace hcs {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for shot `shot_index` of a run. Independent of thread scheduling.
constexpr std::uint64_t shot_seed(std::uint64_t master_seed, std::uint64_t shot_index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(shot_index + 0x632be59bd9b4e019ULL));
}

inline Rng make_shot_rng(std::uint64_t master_seed, std::uint64_t shot_index) {
  return Rng(shot_seed(master_seed, shot_index));
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

/// Uniform integer in [0, n).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace hcs
