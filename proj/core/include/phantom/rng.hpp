#pragma once

#include <cstdint>
#include <random>

namespace phantom {

using Rng = std::mt19937_64;

/// Independent substreams of one experiment seed. Each consumer of randomness
/// owns its own stream so that, for example, shadowing draws are identical
/// regardless of what the handover logic decided.
enum class Stream : std::uint64_t {
  topology = 1,
  users = 2,
  shadowing = 3,
  subscribers = 4,
};

inline Rng make_rng(std::uint64_t seed, Stream stream) {
  const auto s = static_cast<std::uint64_t>(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), 0x9e3779b9u};
  return Rng(seq);
}

}  // namespace phantom
