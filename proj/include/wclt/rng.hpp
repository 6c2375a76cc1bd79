#pragma once

#include <cstdint>

namespace wclt {

// Counter-based uniforms: every draw is a pure function of (seed, stream, index),
// so replicate- or path-level parallelism never changes a result.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t index) noexcept {
  return mix64(mix64(mix64(seed) ^ stream) + index);
}

/// Uniform in the open interval (0,1).
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) noexcept {
  const std::uint64_t bits = counter_hash(seed, stream, index) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Domain tags keep host-graph and chaos-path streams disjoint for a shared seed.
inline constexpr std::uint64_t kHostStreamTag = 0x686f7374ULL;   // "host"
inline constexpr std::uint64_t kPathStreamTag = 0x70617468ULL;   // "path"
inline constexpr std::uint64_t kWeightStreamTag = 0x77677473ULL; // "wgts"

}  // namespace wclt
