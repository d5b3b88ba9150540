#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "obmm/kernels.hpp"
#include "obmm/rng.hpp"

using namespace obmm;

namespace {

std::vector<std::uint64_t> random_words(std::uint64_t seed, std::size_t n) {
    std::vector<std::uint64_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng::at(seed, 0, i);
    return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar backend is always available") {
    CHECK(kernels::backend_available(kernels::Backend::scalar));
}

TEST_CASE("backends agree on every operation and length") {
    if (!kernels::backend_available(kernels::Backend::avx2)) {
        MESSAGE("avx2 not available on this host; equivalence check skipped");
        return;
    }
    const auto& scalar = kernels::ops_for(kernels::Backend::scalar);
    const auto& avx2 = kernels::ops_for(kernels::Backend::avx2);
    // Lengths straddling the 4-word vector width, plus a large buffer.
    std::vector<std::size_t> lengths;
    for (std::size_t n = 0; n <= 67; ++n) lengths.push_back(n);
    lengths.push_back(1000);
    for (std::size_t n : lengths) {
        const auto a0 = random_words(2 * n + 1, n);
        const auto b = random_words(2 * n + 2, n);

        auto x1 = a0, x2 = a0;
        scalar.xor_words(x1.data(), b.data(), n);
        avx2.xor_words(x2.data(), b.data(), n);
        CHECK(x1 == x2);

        auto o1 = a0, o2 = a0;
        scalar.or_words(o1.data(), b.data(), n);
        avx2.or_words(o2.data(), b.data(), n);
        CHECK(o1 == o2);

        std::vector<std::uint64_t> d1(n), d2(n);
        scalar.and_words(d1.data(), a0.data(), b.data(), n);
        avx2.and_words(d2.data(), a0.data(), b.data(), n);
        CHECK(d1 == d2);

        CHECK(scalar.popcount_words(a0.data(), n) == avx2.popcount_words(a0.data(), n));
    }
}

TEST_CASE("force_backend switches the active table and resets") {
    const auto detected = kernels::active_backend();
    kernels::force_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    if (kernels::backend_available(kernels::Backend::avx2)) {
        kernels::force_backend(kernels::Backend::avx2);
        CHECK(kernels::active_backend() == kernels::Backend::avx2);
    }
    kernels::reset_backend();
    CHECK(kernels::active_backend() == detected);
}

TEST_CASE("forcing an unavailable backend throws") {
    if (kernels::backend_available(kernels::Backend::avx2)) {
        MESSAGE("avx2 available here; unavailability path not exercisable");
        return;
    }
    CHECK_THROWS_AS(kernels::force_backend(kernels::Backend::avx2), std::runtime_error);
}

TEST_CASE("xor twice restores, or is idempotent, and masks") {
    const std::size_t n = 33;
    const auto a = random_words(7, n);
    const auto b = random_words(8, n);
    const auto& k = kernels::active();

    auto x = a;
    k.xor_words(x.data(), b.data(), n);
    k.xor_words(x.data(), b.data(), n);
    CHECK(x == a);

    auto o = a;
    k.or_words(o.data(), b.data(), n);
    auto o2 = o;
    k.or_words(o2.data(), b.data(), n);
    CHECK(o == o2);

    std::vector<std::uint64_t> d(n);
    k.and_words(d.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(d[i] == (a[i] & b[i]));
}

}  // TEST_SUITE
