#include "obmm/kernels.hpp"

#include <bit>
#include <stdexcept>

namespace obmm::kernels {

namespace {

void xor_words_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

void or_words_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

void and_words_scalar(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                      std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] & b[i];
}

std::uint64_t popcount_words_scalar(const std::uint64_t* p, std::size_t n) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += static_cast<std::uint64_t>(std::popcount(p[i]));
    return c;
}

constexpr Ops scalar_ops{xor_words_scalar, or_words_scalar, and_words_scalar,
                         popcount_words_scalar};

bool avx2_supported() {
#if defined(OBMM_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend detect() { return avx2_supported() ? Backend::avx2 : Backend::scalar; }

Backend g_backend = detect();

}  // namespace

#if defined(OBMM_HAVE_AVX2_TU)
extern const Ops avx2_ops;  // defined in kernels_avx2.cpp
#endif

const Ops& ops_for(Backend b) {
#if defined(OBMM_HAVE_AVX2_TU)
    if (b == Backend::avx2) return avx2_ops;
#endif
    if (b == Backend::avx2) throw std::runtime_error("avx2 backend not built");
    return scalar_ops;
}

const Ops& active() { return ops_for(g_backend); }

Backend active_backend() { return g_backend; }

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    return avx2_supported();
}

void force_backend(Backend b) {
    if (!backend_available(b)) throw std::runtime_error("requested kernel backend unavailable");
    g_backend = b;
}

void reset_backend() { g_backend = detect(); }

}  // namespace obmm::kernels
