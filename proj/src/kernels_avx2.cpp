// AVX2 variants of the word kernels. Compiled with -mavx2 in its own TU;
// only reached when runtime detection (kernels.cpp) says the CPU has AVX2.
#include <immintrin.h>

#include <bit>
#include <cstddef>
#include <cstdint>

#include "obmm/kernels.hpp"

namespace obmm::kernels {

namespace {

void xor_words_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(d, s));
    }
    for (; i < n; ++i) dst[i] ^= src[i];
}

void or_words_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(d, s));
    }
    for (; i < n; ++i) dst[i] |= src[i];
}

void and_words_avx2(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                    std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_and_si256(x, y));
    }
    for (; i < n; ++i) dst[i] = a[i] & b[i];
}

std::uint64_t popcount_words_avx2(const std::uint64_t* p, std::size_t n) {
    // Scalar popcnt is already fast; keep the loop unrolled by 4 for parity.
    std::uint64_t c0 = 0, c1 = 0, c2 = 0, c3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        c0 += static_cast<std::uint64_t>(std::popcount(p[i]));
        c1 += static_cast<std::uint64_t>(std::popcount(p[i + 1]));
        c2 += static_cast<std::uint64_t>(std::popcount(p[i + 2]));
        c3 += static_cast<std::uint64_t>(std::popcount(p[i + 3]));
    }
    std::uint64_t c = c0 + c1 + c2 + c3;
    for (; i < n; ++i) c += static_cast<std::uint64_t>(std::popcount(p[i]));
    return c;
}

}  // namespace

extern const Ops avx2_ops;
const Ops avx2_ops{xor_words_avx2, or_words_avx2, and_words_avx2, popcount_words_avx2};

}  // namespace obmm::kernels
