#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "obmm/bitmatrix.hpp"
#include "obmm/dense_matrix.hpp"

// Opportunistic ("broken") Strassen pseudo-product.
//
// The 2x2 step drops the product needed for the A11*B11 contribution and
// keeps everything else reachable with 6 multiplications:
//   C11 = A12 B21
//   C12 = A11 B12 + A12 B22
//   C21 = A21 B11 + A22 B21
//   C22 = A21 B12 + A22 B22
// Iterating the step s times on m x m operands (m = b * 2^s) yields the
// pseudo-product: summation restricted to index triples whose high parts
// satisfy x' OR y' OR z' = all-ones, where u' is the s-bit string of
// floor(u / b) (MSB first, matching the recursive halving).
namespace obmm::pseudomul {

struct PseudoParams {
    int s = 0;           // recursion depth
    std::int64_t b = 1;  // base block size

    std::int64_t m() const { return b << s; }

    void validate() const {
        if (s < 0 || s > 30) throw std::invalid_argument("PseudoParams: s out of range [0,30]");
        if (b < 1) throw std::invalid_argument("PseudoParams: b must be >= 1");
        if (m() > (std::int64_t(1) << 24))
            throw std::invalid_argument("PseudoParams: m = b * 2^s too large");
    }
};

// base_mults: invocations of the base-case multiply (b x b blocks), 6^s for a
// full recursion. block_adds: additions in units of b x b blocks, 7*(6^s-4^s).
struct CounterReport {
    std::uint64_t base_mults = 0;
    std::uint64_t block_adds = 0;

    CounterReport& operator+=(const CounterReport& o) {
        base_mults += o.base_mults;
        block_adds += o.block_adds;
        return *this;
    }
    bool operator==(const CounterReport&) const = default;
};

// Does the triple (x, y, z) survive the pseudo-product at these parameters?
// Throws std::out_of_range unless all of x, y, z lie in [0, m).
inline bool triple_survives(std::int64_t x, std::int64_t y, std::int64_t z,
                            const PseudoParams& p) {
    p.validate();
    const std::int64_t m = p.m();
    if (x < 0 || x >= m || y < 0 || y >= m || z < 0 || z >= m)
        throw std::out_of_range("triple_survives: index outside [0, m)");
    const std::int64_t mask = (std::int64_t(1) << p.s) - 1;
    return ((x / p.b) | (y / p.b) | (z / p.b)) == mask;
}

// Stack of GF(2) matrices with identical shape, used as one ring element
// (coordinatewise xor ring, GF(2)^L) for witness payloads.
struct BitPlanes {
    std::vector<BitMatrix> planes;

    BitPlanes() = default;
    BitPlanes(std::size_t count, std::int64_t rows, std::int64_t cols)
        : planes(count, BitMatrix(rows, cols)) {}

    std::size_t plane_count() const { return planes.size(); }
    std::int64_t rows() const { return planes.empty() ? 0 : planes[0].rows(); }
    std::int64_t cols() const { return planes.empty() ? 0 : planes[0].cols(); }
    BitMatrix& operator[](std::size_t i) { return planes[i]; }
    const BitMatrix& operator[](std::size_t i) const { return planes[i]; }

    bool operator==(const BitPlanes&) const = default;
};

// Ring policies. Lhs/Rhs may differ (bit-plane payloads multiply a plain
// GF(2) left operand); each policy supplies shape access, quadrant plumbing,
// ring add/sub, and the base-case multiply.

struct Gf2Ring {
    using Lhs = BitMatrix;
    using Rhs = BitMatrix;
    static std::int64_t lhs_dim(const Lhs& m) { return square_dim(m); }
    static std::int64_t rhs_dim(const Rhs& m) { return square_dim(m); }
    static Lhs lhs_add(const Lhs& a, const Lhs& b) { return xor_mat(a, b); }
    static Lhs lhs_sub(const Lhs& a, const Lhs& b) { return xor_mat(a, b); }
    static Rhs rhs_add(const Rhs& a, const Rhs& b) { return xor_mat(a, b); }
    static Rhs rhs_sub(const Rhs& a, const Rhs& b) { return xor_mat(a, b); }
    static Rhs mul_base(const Lhs& a, const Rhs& b) { return gf2_mul_naive(a, b); }
    static Lhs lhs_quadrant(const Lhs& m, std::int64_t r, std::int64_t c, std::int64_t n) {
        return m.extract(r, c, n, n);
    }
    static Rhs rhs_quadrant(const Rhs& m, std::int64_t r, std::int64_t c, std::int64_t n) {
        return m.extract(r, c, n, n);
    }
    static Rhs rhs_zero_like(const Rhs&, std::int64_t n) { return BitMatrix(n, n); }
    static void rhs_paste(Rhs& dst, const Rhs& src, std::int64_t r, std::int64_t c) {
        dst.paste(src, r, c);
    }
    static std::int64_t square_dim(const BitMatrix& m) {
        if (m.rows() != m.cols()) throw std::invalid_argument("operand must be square");
        return m.rows();
    }
};

// Integers mod 2^bits(T), wraparound semantics.
template <class T>
struct ModRing {
    using Lhs = DenseMatrix<T>;
    using Rhs = DenseMatrix<T>;
    static std::int64_t square_dim(const DenseMatrix<T>& m) {
        if (m.rows() != m.cols()) throw std::invalid_argument("operand must be square");
        return m.rows();
    }
    static std::int64_t lhs_dim(const Lhs& m) { return square_dim(m); }
    static std::int64_t rhs_dim(const Rhs& m) { return square_dim(m); }
    static Lhs lhs_add(const Lhs& a, const Lhs& b) { return dense_add(a, b); }
    static Lhs lhs_sub(const Lhs& a, const Lhs& b) { return dense_sub(a, b); }
    static Rhs rhs_add(const Rhs& a, const Rhs& b) { return dense_add(a, b); }
    static Rhs rhs_sub(const Rhs& a, const Rhs& b) { return dense_sub(a, b); }
    static Rhs mul_base(const Lhs& a, const Rhs& b) { return dense_mul_naive(a, b); }
    static Lhs lhs_quadrant(const Lhs& m, std::int64_t r, std::int64_t c, std::int64_t n) {
        return m.extract(r, c, n, n);
    }
    static Rhs rhs_quadrant(const Rhs& m, std::int64_t r, std::int64_t c, std::int64_t n) {
        return m.extract(r, c, n, n);
    }
    static Rhs rhs_zero_like(const Rhs&, std::int64_t n) { return DenseMatrix<T>(n, n); }
    static void rhs_paste(Rhs& dst, const Rhs& src, std::int64_t r, std::int64_t c) {
        dst.paste(src, r, c);
    }
};

// GF(2) left operand against a bundle of payload planes; the left matrix acts
// diagonally (the same A multiplies every plane), so one recursion tree and
// one set of counters covers the whole bundle.
struct BitPlaneRing {
    using Lhs = BitMatrix;
    using Rhs = BitPlanes;
    static std::int64_t lhs_dim(const Lhs& m) { return Gf2Ring::square_dim(m); }
    static std::int64_t rhs_dim(const Rhs& p) {
        if (p.plane_count() == 0) throw std::invalid_argument("empty plane bundle");
        if (p.rows() != p.cols()) throw std::invalid_argument("operand must be square");
        return p.rows();
    }
    static Lhs lhs_add(const Lhs& a, const Lhs& b) { return xor_mat(a, b); }
    static Lhs lhs_sub(const Lhs& a, const Lhs& b) { return xor_mat(a, b); }
    static Rhs rhs_add(const Rhs& a, const Rhs& b) {
        Rhs c = a;
        for (std::size_t i = 0; i < c.plane_count(); ++i) c[i] = xor_mat(a[i], b[i]);
        return c;
    }
    static Rhs rhs_sub(const Rhs& a, const Rhs& b) { return rhs_add(a, b); }
    static Rhs mul_base(const Lhs& a, const Rhs& b) {
        Rhs c = b;
        for (std::size_t i = 0; i < c.plane_count(); ++i) c[i] = gf2_mul_naive(a, b[i]);
        return c;
    }
    static Lhs lhs_quadrant(const Lhs& m, std::int64_t r, std::int64_t c, std::int64_t n) {
        return m.extract(r, c, n, n);
    }
    static Rhs rhs_quadrant(const Rhs& p, std::int64_t r, std::int64_t c, std::int64_t n) {
        Rhs out;
        out.planes.reserve(p.plane_count());
        for (const auto& pl : p.planes) out.planes.push_back(pl.extract(r, c, n, n));
        return out;
    }
    static Rhs rhs_zero_like(const Rhs& proto, std::int64_t n) {
        return BitPlanes(proto.plane_count(), n, n);
    }
    static void rhs_paste(Rhs& dst, const Rhs& src, std::int64_t r, std::int64_t c) {
        for (std::size_t i = 0; i < dst.plane_count(); ++i) dst[i].paste(src[i], r, c);
    }
};

// One broken step over quadrants {11, 12, 21, 22}. Exactly 6 calls to `mul`
// and 14 ring additions, counted into `rep` with the given weight (the number
// of b x b blocks per half-size operand). Straight-line program with shared
// subexpressions; signs matter for non-characteristic-2 rings.
template <class Ring, class MulFn>
std::array<typename Ring::Rhs, 4> broken_step_quadrants(
    const std::array<typename Ring::Lhs, 4>& a, const std::array<typename Ring::Rhs, 4>& b,
    MulFn&& mul, CounterReport& rep, std::uint64_t add_weight) {
    const auto& a11 = a[0];
    const auto& a12 = a[1];
    const auto& a21 = a[2];
    const auto& a22 = a[3];
    const auto& b11 = b[0];
    const auto& b12 = b[1];
    const auto& b21 = b[2];
    const auto& b22 = b[3];
    const auto bump = [&rep, add_weight] { rep.block_adds += add_weight; };

    auto t1 = Ring::lhs_add(a21, a22);
    bump();
    auto t2 = Ring::lhs_add(a12, t1);
    bump();
    auto t3 = Ring::lhs_add(a11, t2);
    bump();
    auto t4 = Ring::lhs_add(a12, a22);
    bump();
    auto s1 = Ring::rhs_sub(b21, b22);
    bump();
    auto s2 = Ring::rhs_add(b12, s1);
    bump();
    auto s3 = Ring::rhs_sub(b11, s2);
    bump();
    auto s4 = Ring::rhs_sub(b12, b22);
    bump();

    auto p0 = mul(t2, s2);
    auto p1 = mul(t1, s1);
    auto p2 = mul(a12, b21);
    auto p3 = mul(a21, s3);
    auto p4 = mul(t3, b12);
    auto p5 = mul(t4, s4);

    auto v = Ring::rhs_sub(p0, p2);
    bump();
    auto u = Ring::rhs_sub(v, p5);
    bump();
    auto w = Ring::rhs_add(p1, p4);
    bump();
    auto c12 = Ring::rhs_sub(w, v);
    bump();
    auto c21 = Ring::rhs_add(u, p3);
    bump();
    auto c22 = Ring::rhs_sub(u, p1);
    bump();
    return {std::move(p2), std::move(c12), std::move(c21), std::move(c22)};
}

// Standalone broken step: quadrants in, quadrants out, base multiply from the
// ring policy. 6 base_mults and 14 block_adds per call.
template <class Ring>
std::array<typename Ring::Rhs, 4> broken_step_2x2(const std::array<typename Ring::Lhs, 4>& a,
                                                  const std::array<typename Ring::Rhs, 4>& b,
                                                  CounterReport* rep = nullptr) {
    CounterReport local;
    CounterReport& r = rep ? *rep : local;
    const auto mul = [&r](const typename Ring::Lhs& x, const typename Ring::Rhs& y) {
        r.base_mults += 1;
        return Ring::mul_base(x, y);
    };
    return broken_step_quadrants<Ring>(a, b, mul, r, 1);
}

namespace detail {

template <class Ring>
typename Ring::Rhs pseudo_rec(const typename Ring::Lhs& a, const typename Ring::Rhs& b, int level,
                              std::int64_t bdim, CounterReport& rep) {
    if (level == 0) {
        rep.base_mults += 1;
        return Ring::mul_base(a, b);
    }
    const std::int64_t h = bdim << (level - 1);
    const std::uint64_t weight = std::uint64_t(1) << (2 * (level - 1));  // 4^(level-1) blocks
    const std::array<typename Ring::Lhs, 4> aq{
        Ring::lhs_quadrant(a, 0, 0, h), Ring::lhs_quadrant(a, 0, h, h),
        Ring::lhs_quadrant(a, h, 0, h), Ring::lhs_quadrant(a, h, h, h)};
    const std::array<typename Ring::Rhs, 4> bq{
        Ring::rhs_quadrant(b, 0, 0, h), Ring::rhs_quadrant(b, 0, h, h),
        Ring::rhs_quadrant(b, h, 0, h), Ring::rhs_quadrant(b, h, h, h)};
    const auto mul = [&](const typename Ring::Lhs& x, const typename Ring::Rhs& y) {
        return pseudo_rec<Ring>(x, y, level - 1, bdim, rep);
    };
    auto cq = broken_step_quadrants<Ring>(aq, bq, mul, rep, weight);
    auto c = Ring::rhs_zero_like(b, 2 * h);
    Ring::rhs_paste(c, cq[0], 0, 0);
    Ring::rhs_paste(c, cq[1], 0, h);
    Ring::rhs_paste(c, cq[2], h, 0);
    Ring::rhs_paste(c, cq[3], h, h);
    return c;
}

}  // namespace detail

// Pseudo-product by iterated broken steps. Operands must be m x m with
// m = b * 2^s. Counters (if requested) accumulate across the whole recursion.
template <class Ring>
typename Ring::Rhs pseudo_product(const typename Ring::Lhs& a, const typename Ring::Rhs& b,
                                  const PseudoParams& p, CounterReport* rep = nullptr) {
    p.validate();
    if (Ring::lhs_dim(a) != p.m() || Ring::rhs_dim(b) != p.m())
        throw std::invalid_argument("pseudo_product: operands must be m x m with m = b * 2^s");
    CounterReport local;
    CounterReport& r = rep ? *rep : local;
    return detail::pseudo_rec<Ring>(a, b, p.s, p.b, r);
}

// Direct-summation oracles: C[x][y] = sum over surviving z of A[x][z]*B[z][y].
// Slow by design; used to pin down the fast recursion in tests.
BitMatrix pseudo_product_oracle(const BitMatrix& a, const BitMatrix& b, const PseudoParams& p);
BitPlanes pseudo_product_oracle(const BitMatrix& a, const BitPlanes& b, const PseudoParams& p);

template <class T>
DenseMatrix<T> pseudo_product_oracle(const DenseMatrix<T>& a, const DenseMatrix<T>& b,
                                     const PseudoParams& p) {
    p.validate();
    const std::int64_t m = p.m();
    if (a.rows() != m || a.cols() != m || b.rows() != m || b.cols() != m)
        throw std::invalid_argument("pseudo_product_oracle: operands must be m x m");
    const std::int64_t mask = (std::int64_t(1) << p.s) - 1;
    DenseMatrix<T> c(m, m);
    for (std::int64_t x = 0; x < m; ++x)
        for (std::int64_t z = 0; z < m; ++z) {
            const std::uint64_t av = a.get(x, z);
            if (!av) continue;
            const std::int64_t hxz = (x / p.b) | (z / p.b);
            for (std::int64_t y = 0; y < m; ++y) {
                if ((hxz | (y / p.b)) != mask) continue;
                c.set(x, y, static_cast<T>(std::uint64_t(c.get(x, y)) +
                                           av * std::uint64_t(b.get(z, y))));
            }
        }
    return c;
}

// Convenience non-template entry points.
BitMatrix pseudo_product_gf2(const BitMatrix& a, const BitMatrix& b, const PseudoParams& p,
                             CounterReport* rep = nullptr);
BitPlanes pseudo_product_bitplanes(const BitMatrix& a, const BitPlanes& b, const PseudoParams& p,
                                   CounterReport* rep = nullptr);

}  // namespace obmm::pseudomul
