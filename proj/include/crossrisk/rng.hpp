#pragma once

#include <bit>
#include <cstdint>

namespace crossrisk {

inline constexpr std::uint64_t kDefaultSeed = 20240901;

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic per-substream seed; substreams of one master seed are
// decorrelated by double mixing.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(mix64(master) ^ mix64(stream * 0xD1342543DE82EF95ull + 1));
}

inline void hash_combine(std::uint64_t& h, std::uint64_t v) {
    h = mix64(h ^ mix64(v));
}

inline void hash_combine(std::uint64_t& h, double v) {
    hash_combine(h, std::bit_cast<std::uint64_t>(v));
}

}  // namespace crossrisk
