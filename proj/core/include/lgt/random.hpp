#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lgt {

/// mt19937_64 and seed_seq are fully specified by the standard, so streams
/// derived here are reproducible across platforms. Distribution objects from
/// <random> are not, which is why uniform01 is hand-rolled.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

/// Named substream of a master seed, e.g. substream(seed, "trials", i).
inline Rng substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
  std::uint64_t tag = 1469598103934665603ull;  // FNV-1a
  for (char c : name) {
    tag ^= static_cast<unsigned char>(c);
    tag *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace lgt
