#include "obmm/bitmatrix.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstring>
#include <stdexcept>

#include "obmm/kernels.hpp"
#include "obmm/rng.hpp"

namespace obmm {

namespace {

constexpr std::int64_t kMaxDim = std::int64_t(1) << 24;

void check_dims(std::int64_t rows, std::int64_t cols) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix dimensions must be positive");
    if (rows > kMaxDim || cols > kMaxDim) throw std::invalid_argument("matrix dimension too large");
}

// Up to 64 bits starting at absolute bit position `pos` of `src`, low-aligned.
// Only touches words that actually contain requested bits. Caller masks.
inline std::uint64_t fetch_bits(const std::uint64_t* src, std::int64_t pos, std::int64_t count) {
    const std::int64_t w = pos >> 6;
    const int off = static_cast<int>(pos & 63);
    std::uint64_t out = src[w] >> off;
    if (off != 0 && off + count > 64) out |= src[w + 1] << (64 - off);
    return out;
}

// Copy `nbits` bits from src@src_off to dst@dst_off (bit positions relative to
// the given word pointers). Ranges must not alias. Destination bits outside
// the run are preserved.
void copy_bit_run(std::uint64_t* dst, std::int64_t dst_off, const std::uint64_t* src,
                  std::int64_t src_off, std::int64_t nbits) {
    std::int64_t d = dst_off, s = src_off, left = nbits;
    while (left > 0) {
        const std::int64_t dw = d >> 6;
        const int dbit = static_cast<int>(d & 63);
        const std::int64_t chunk = std::min<std::int64_t>(64 - dbit, left);
        const std::uint64_t mask = (chunk == 64) ? ~0ULL : ((1ULL << chunk) - 1);
        const std::uint64_t bits = fetch_bits(src, s, chunk) & mask;
        dst[dw] = (dst[dw] & ~(mask << dbit)) | (bits << dbit);
        d += chunk;
        s += chunk;
        left -= chunk;
    }
}

}  // namespace

BitMatrix::BitMatrix(std::int64_t rows, std::int64_t cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    stride_ = static_cast<std::size_t>((cols + 63) / 64);
    data_.assign(static_cast<std::size_t>(rows) * stride_, 0);
}

BitMatrix BitMatrix::identity(std::int64_t n) {
    BitMatrix m(n, n);
    for (std::int64_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::random(std::int64_t rows, std::int64_t cols, std::uint64_t seed,
                            double density) {
    BitMatrix m(rows, cols);
    if (density <= 0.0) return m;
    const bool all = density >= 1.0;
    const std::uint64_t threshold =
        all ? ~0ULL : static_cast<std::uint64_t>(density * 18446744073709551616.0L);
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::int64_t j = 0; j < cols; ++j) {
            const std::uint64_t raw =
                rng::at(seed, 0, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                                     static_cast<std::uint64_t>(j));
            if (all || raw < threshold) m.set(i, j, true);
        }
    }
    return m;
}

bool BitMatrix::get(std::int64_t i, std::int64_t j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return (row(i)[j >> 6] >> (j & 63)) & 1;
}

void BitMatrix::set(std::int64_t i, std::int64_t j, bool v) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    const std::uint64_t bit = 1ULL << (j & 63);
    if (v)
        row(i)[j >> 6] |= bit;
    else
        row(i)[j >> 6] &= ~bit;
}

bool BitMatrix::all_zero() const {
    for (std::uint64_t w : data_)
        if (w) return false;
    return true;
}

std::uint64_t BitMatrix::popcount() const {
    return kernels::active().popcount_words(data_.data(), data_.size());
}

bool BitMatrix::padding_clean() const {
    const int tail = static_cast<int>(cols_ & 63);
    if (tail == 0) return true;
    const std::uint64_t bad = ~((1ULL << tail) - 1);
    for (std::int64_t i = 0; i < rows_; ++i)
        if (row(i)[stride_ - 1] & bad) return false;
    return true;
}

BitMatrix BitMatrix::extract(std::int64_t r0, std::int64_t c0, std::int64_t h,
                             std::int64_t w) const {
    if (r0 < 0 || c0 < 0 || h <= 0 || w <= 0 || r0 + h > rows_ || c0 + w > cols_)
        throw std::invalid_argument("extract window out of range");
    BitMatrix out(h, w);
    if ((c0 & 63) == 0) {
        const std::size_t src_word0 = static_cast<std::size_t>(c0 >> 6);
        const std::size_t nwords = out.stride_;
        const int tail = static_cast<int>(w & 63);
        const std::uint64_t tail_mask = tail ? ((1ULL << tail) - 1) : ~0ULL;
        for (std::int64_t r = 0; r < h; ++r) {
            std::memcpy(out.row(r), row(r0 + r) + src_word0, nwords * 8);
            out.row(r)[nwords - 1] &= tail_mask;
        }
    } else {
        for (std::int64_t r = 0; r < h; ++r) copy_bit_run(out.row(r), 0, row(r0 + r), c0, w);
    }
    return out;
}

void BitMatrix::paste(const BitMatrix& src, std::int64_t r0, std::int64_t c0) {
    if (r0 < 0 || c0 < 0 || r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_)
        throw std::invalid_argument("paste window out of range");
    const std::int64_t h = src.rows_, w = src.cols_;
    if ((c0 & 63) == 0) {
        const std::size_t dst_word0 = static_cast<std::size_t>(c0 >> 6);
        const std::size_t full = static_cast<std::size_t>(w >> 6);
        const int tail = static_cast<int>(w & 63);
        for (std::int64_t r = 0; r < h; ++r) {
            std::uint64_t* d = row(r0 + r) + dst_word0;
            const std::uint64_t* s = src.row(r);
            std::memcpy(d, s, full * 8);
            if (tail) {
                const std::uint64_t mask = (1ULL << tail) - 1;
                d[full] = (d[full] & ~mask) | (s[full] & mask);
            }
        }
    } else {
        for (std::int64_t r = 0; r < h; ++r) copy_bit_run(row(r0 + r), c0, src.row(r), 0, w);
    }
}

namespace {

void check_same_shape(const BitMatrix& a, const BitMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(what) + ": shapes disagree");
}

void check_inner(const BitMatrix& a, const BitMatrix& b, const char* what) {
    if (a.cols() != b.rows())
        throw std::invalid_argument(std::string(what) + ": inner dimensions disagree");
}

template <bool kXor>
BitMatrix row_combine_mul(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix c(a.rows(), b.cols());
    const auto& k = kernels::active();
    const std::size_t bw = b.words_per_row();
    for (std::int64_t i = 0; i < a.rows(); ++i) {
        const std::uint64_t* arow = a.row(i);
        std::uint64_t* crow = c.row(i);
        for (std::size_t wi = 0; wi < a.words_per_row(); ++wi) {
            std::uint64_t bits = arow[wi];
            while (bits) {
                const std::int64_t kk =
                    static_cast<std::int64_t>(wi) * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                if constexpr (kXor)
                    k.xor_words(crow, b.row(kk), bw);
                else
                    k.or_words(crow, b.row(kk), bw);
            }
        }
    }
    return c;
}

}  // namespace

BitMatrix bool_mul_naive(const BitMatrix& a, const BitMatrix& b) {
    check_inner(a, b, "bool_mul_naive");
    return row_combine_mul<false>(a, b);
}

BitMatrix gf2_mul_naive(const BitMatrix& a, const BitMatrix& b) {
    check_inner(a, b, "gf2_mul_naive");
    return row_combine_mul<true>(a, b);
}

BitMatrix xor_mat(const BitMatrix& a, const BitMatrix& b) {
    check_same_shape(a, b, "xor_mat");
    BitMatrix c = a;
    const std::size_t n = c.words_per_row() * static_cast<std::size_t>(c.rows());
    kernels::active().xor_words(c.row(0), b.row(0), n);
    return c;
}

BitMatrix or_mat(const BitMatrix& a, const BitMatrix& b) {
    check_same_shape(a, b, "or_mat");
    BitMatrix c = a;
    const std::size_t n = c.words_per_row() * static_cast<std::size_t>(c.rows());
    kernels::active().or_words(c.row(0), b.row(0), n);
    return c;
}

BitMatrix and_mat(const BitMatrix& a, const BitMatrix& b) {
    check_same_shape(a, b, "and_mat");
    BitMatrix c(a.rows(), a.cols());
    const std::size_t n = c.words_per_row() * static_cast<std::size_t>(c.rows());
    kernels::active().and_words(c.row(0), a.row(0), b.row(0), n);
    return c;
}

bool is_subset(const BitMatrix& a, const BitMatrix& b) {
    check_same_shape(a, b, "is_subset");
    const std::size_t n = a.words_per_row() * static_cast<std::size_t>(a.rows());
    const std::uint64_t* pa = a.row(0);
    const std::uint64_t* pb = b.row(0);
    for (std::size_t i = 0; i < n; ++i)
        if (pa[i] & ~pb[i]) return false;
    return true;
}

namespace {

BitMatrix strassen_rec(const BitMatrix& a, const BitMatrix& b, std::int64_t base) {
    const std::int64_t n = a.rows();
    if (n <= base) return gf2_mul_naive(a, b);
    const std::int64_t h = n / 2;
    const BitMatrix a11 = a.extract(0, 0, h, h), a12 = a.extract(0, h, h, h),
                    a21 = a.extract(h, 0, h, h), a22 = a.extract(h, h, h, h);
    const BitMatrix b11 = b.extract(0, 0, h, h), b12 = b.extract(0, h, h, h),
                    b21 = b.extract(h, 0, h, h), b22 = b.extract(h, h, h, h);
    // Over GF(2) subtraction is addition, so the classical seven products
    // use xor throughout.
    const BitMatrix m1 = strassen_rec(xor_mat(a11, a22), xor_mat(b11, b22), base);
    const BitMatrix m2 = strassen_rec(xor_mat(a21, a22), b11, base);
    const BitMatrix m3 = strassen_rec(a11, xor_mat(b12, b22), base);
    const BitMatrix m4 = strassen_rec(a22, xor_mat(b21, b11), base);
    const BitMatrix m5 = strassen_rec(xor_mat(a11, a12), b22, base);
    const BitMatrix m6 = strassen_rec(xor_mat(a21, a11), xor_mat(b11, b12), base);
    const BitMatrix m7 = strassen_rec(xor_mat(a12, a22), xor_mat(b21, b22), base);
    BitMatrix c(n, n);
    c.paste(xor_mat(xor_mat(m1, m4), xor_mat(m5, m7)), 0, 0);
    c.paste(xor_mat(m3, m5), 0, h);
    c.paste(xor_mat(m2, m4), h, 0);
    c.paste(xor_mat(xor_mat(m1, m2), xor_mat(m3, m6)), h, h);
    return c;
}

}  // namespace

BitMatrix gf2_mul_strassen(const BitMatrix& a, const BitMatrix& b, std::int64_t base) {
    if (base < 1) throw std::invalid_argument("gf2_mul_strassen: base must be >= 1");
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("gf2_mul_strassen: inputs must be square and equal-sized");
    const std::int64_t n = a.rows();
    if (n % base != 0 || !std::has_single_bit(static_cast<std::uint64_t>(n / base)))
        throw std::invalid_argument("gf2_mul_strassen: size must be base * 2^t");
    return strassen_rec(a, b, base);
}

}  // namespace obmm
