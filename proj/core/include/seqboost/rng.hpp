#pragma once

#include <cstdint>
#include <random>

namespace seqboost {

/// Random source used for all sampling. Each simulated path owns one.
using Rng = std::mt19937_64;

/// SplitMix64 finaliser; a bijective mixer on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stream roles, so that paired methods can share data while tie-breaks and
/// randomisation draws live on their own sub-streams.
enum class StreamRole : std::uint64_t {
  Data = 1,
  TieBreak = 2,
  Randomization = 3,
  Population = 4,
  NullData = 5,
};

/// Derives an independent sub-seed from (master, grid index, trial index, role)
/// by chaining SplitMix64 over the components. Identical inputs always give the
/// same seed, independent of thread scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t grid, std::uint64_t trial,
                                    StreamRole role) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ grid);
  h = splitmix64(h ^ trial);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  return h;
}

inline Rng make_rng(std::uint64_t master, std::uint64_t grid, std::uint64_t trial, StreamRole role) {
  return Rng(derive_seed(master, grid, trial, role));
}

}  // namespace seqboost
