#pragma once

#include <cstdint>
#include <random>

namespace quartz {

using Rng = std::mt19937_64;

/// Seeds a generator from a 64-bit seed. Both halves of the seed feed a
/// seed_seq so nearby seeds give unrelated streams.
inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), 0x51ed2701u};
  return Rng(seq);
}

}  // namespace quartz
