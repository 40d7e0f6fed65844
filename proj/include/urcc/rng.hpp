#pragma once

#include <cstdint>
#include <random>

namespace urcc {

/// splitmix64 finalizer; used to derive independent per-trial streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Keyed stream derivation: the RNG for trial i of a run seeded with s is a
 * pure function of (s, i). Results are therefore bit-identical regardless of
 * how trials are scheduled across workers.
 */
inline std::mt19937_64 trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  return std::mt19937_64(mix64(mix64(master_seed) ^ mix64(trial_index + 0x51a5f51a5ULL)));
}

}  // namespace urcc
