#pragma once

#include <cstdint>
#include <random>

namespace emf {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for stream `stream` of `parent`. Counter-based: the result
/// depends only on the pair, never on how many other streams were drawn.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

using Engine = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

inline double uniform(Engine& eng, double lo, double hi) { return lo + (hi - lo) * uniform01(eng); }

}  // namespace emf
