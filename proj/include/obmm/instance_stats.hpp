#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace obmm {

// Size summary of a product instance with shape d1 x d3 times d3 x d2:
//   psi1 = d1 + d2 + d3
//   psi2 = d1*d2 + d1*d3 + d2*d3
//   psi3 = d1*d2*d3
// Computed exactly in 128-bit arithmetic; values beyond 2^63 are rejected
// (dimensions that large are far outside what this library runs).
struct InstanceStats {
    std::uint64_t d1 = 0, d2 = 0, d3 = 0;
    std::uint64_t psi1 = 0, psi2 = 0, psi3 = 0;

    static InstanceStats make(std::uint64_t d1, std::uint64_t d2, std::uint64_t d3) {
        if (d1 == 0 || d2 == 0 || d3 == 0)
            throw std::invalid_argument("instance dimensions must be positive");
        const auto narrow = [](unsigned __int128 v, const char* what) -> std::uint64_t {
            if (v > (static_cast<unsigned __int128>(1) << 63))
                throw std::overflow_error(std::string("instance statistic ") + what +
                                          " exceeds 2^63");
            return static_cast<std::uint64_t>(v);
        };
        const unsigned __int128 w1 = static_cast<unsigned __int128>(d1) + d2 + d3;
        const unsigned __int128 w2 = static_cast<unsigned __int128>(d1) * d2 +
                                     static_cast<unsigned __int128>(d1) * d3 +
                                     static_cast<unsigned __int128>(d2) * d3;
        const unsigned __int128 w3 =
            static_cast<unsigned __int128>(d1) * d2 * static_cast<unsigned __int128>(d3);
        InstanceStats s;
        s.d1 = d1;
        s.d2 = d2;
        s.d3 = d3;
        s.psi1 = narrow(w1, "psi1");
        s.psi2 = narrow(w2, "psi2");
        s.psi3 = narrow(w3, "psi3");
        return s;
    }

    std::uint64_t max_dim() const { return d1 > d2 ? (d1 > d3 ? d1 : d3) : (d2 > d3 ? d2 : d3); }
};

}  // namespace obmm
