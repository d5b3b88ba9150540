#pragma once

#include <cstddef>
#include <cstdint>

// Word-level kernels behind the bit-matrix operations. A scalar backend is
// always available; on x86-64 an AVX2 backend is selected at startup when the
// CPU supports it. Both backends implement the same contract and are
// equivalence-tested against each other.
namespace obmm::kernels {

enum class Backend { scalar, avx2 };

struct Ops {
    // dst ^= src, n words
    void (*xor_words)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
    // dst |= src, n words
    void (*or_words)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
    // dst = a & b, n words
    void (*and_words)(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                      std::size_t n);
    std::uint64_t (*popcount_words)(const std::uint64_t* p, std::size_t n);
};

const Ops& active();
Backend active_backend();
bool backend_available(Backend b);

// Test hooks. Switching backends is not thread-safe; tests only.
void force_backend(Backend b);  // throws std::runtime_error if unavailable
void reset_backend();           // back to auto-detection

const Ops& ops_for(Backend b);  // direct access, bypassing the active pointer

}  // namespace obmm::kernels
