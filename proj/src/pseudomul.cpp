#include "obmm/pseudomul.hpp"

namespace obmm::pseudomul {

BitMatrix pseudo_product_oracle(const BitMatrix& a, const BitMatrix& b, const PseudoParams& p) {
    p.validate();
    const std::int64_t m = p.m();
    if (a.rows() != m || a.cols() != m || b.rows() != m || b.cols() != m)
        throw std::invalid_argument("pseudo_product_oracle: operands must be m x m");
    const std::int64_t mask = (std::int64_t(1) << p.s) - 1;
    BitMatrix c(m, m);
    for (std::int64_t x = 0; x < m; ++x)
        for (std::int64_t z = 0; z < m; ++z) {
            if (!a.get(x, z)) continue;
            const std::int64_t hxz = (x / p.b) | (z / p.b);
            for (std::int64_t y = 0; y < m; ++y) {
                if ((hxz | (y / p.b)) != mask) continue;
                if (b.get(z, y)) c.set(x, y, !c.get(x, y));
            }
        }
    return c;
}

BitPlanes pseudo_product_oracle(const BitMatrix& a, const BitPlanes& b, const PseudoParams& p) {
    BitPlanes c;
    c.planes.reserve(b.plane_count());
    for (const auto& plane : b.planes) c.planes.push_back(pseudo_product_oracle(a, plane, p));
    return c;
}

BitMatrix pseudo_product_gf2(const BitMatrix& a, const BitMatrix& b, const PseudoParams& p,
                             CounterReport* rep) {
    return pseudo_product<Gf2Ring>(a, b, p, rep);
}

BitPlanes pseudo_product_bitplanes(const BitMatrix& a, const BitPlanes& b, const PseudoParams& p,
                                   CounterReport* rep) {
    return pseudo_product<BitPlaneRing>(a, b, p, rep);
}

}  // namespace obmm::pseudomul
