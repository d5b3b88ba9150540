#pragma once

#include <cstdint>

// Counter-based deterministic RNG. Every random object in the library is a
// pure function of (seed, stream, index), so results are reproducible across
// platforms and runs regardless of evaluation order.
//
// Stream assignment for the sampling reduction (fixed, part of the
// determinism contract):
//   stream 0: row map f1, index x
//   stream 1: column map f2, index y
//   stream 2: inner map f3, index z
//   stream 3: mask matrix D, row-major by 64-bit word (index z*stride + w)
// Other components derive fresh seeds via derive_seed with distinct tags.
namespace obmm::rng {

inline constexpr std::uint64_t kStreamF1 = 0;
inline constexpr std::uint64_t kStreamF2 = 1;
inline constexpr std::uint64_t kStreamF3 = 2;
inline constexpr std::uint64_t kStreamD = 3;

// splitmix64 finalizer (Steele/Lea/Flood); full-period bijective mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Value at position `index` of stream `stream` under `seed`. This is the
// splitmix64 sequence with a per-(seed,stream) starting point.
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t base = mix64(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x1d8e4e27c47d124fULL));
    return mix64(base + index * 0x9e3779b97f4a7c15ULL);
}

// Independent child seed for a sub-computation (e.g. one witness trial).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    return mix64(mix64(seed ^ (tag * 0xd1342543de82ef95ULL)) + index * 0x2545f4914f6cdd1dULL);
}

// Map a raw 64-bit draw to [0, bound) by multiply-shift. Bias is at most
// bound/2^64, far below anything observable at the scales used here.
constexpr std::uint32_t uniform_below(std::uint64_t raw, std::uint32_t bound) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(raw) * bound) >> 64);
}

}  // namespace obmm::rng
