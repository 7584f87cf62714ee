#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace welfare {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and a path of
/// indices (e.g. {trial, player}). Seeds depend only on the path, never on
/// execution order: s = mix64(master); for k in path: s = mix64(s ^ mix64(k)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t k : path) s = mix64(s ^ mix64(k));
  return s;
}

// Stream labels used in derive_seed paths.
inline constexpr std::uint64_t kStreamInit = 1;
inline constexpr std::uint64_t kStreamLearnerX = 2;
inline constexpr std::uint64_t kStreamLearnerY = 3;
inline constexpr std::uint64_t kStreamAssignment = 4;
inline constexpr std::uint64_t kStreamPosterior = 5;

}  // namespace welfare
