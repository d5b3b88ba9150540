#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace obmm {

// Dense bit matrix. Row-major, LSB-first inside each 64-bit word, rows padded
// to whole words. Padding bits are kept zero by every operation ("normal
// form"), so whole-row word kernels never need tail masks.
class BitMatrix {
public:
    BitMatrix() = default;  // empty 0x0; assign before use
    BitMatrix(std::int64_t rows, std::int64_t cols);

    static BitMatrix identity(std::int64_t n);
    // Deterministic pseudo-random fill: P(bit set) = density, from the given seed.
    static BitMatrix random(std::int64_t rows, std::int64_t cols, std::uint64_t seed,
                            double density = 0.5);

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    std::size_t words_per_row() const { return stride_; }

    bool get(std::int64_t i, std::int64_t j) const;
    void set(std::int64_t i, std::int64_t j, bool v);

    std::uint64_t* row(std::int64_t i) { return data_.data() + static_cast<std::size_t>(i) * stride_; }
    const std::uint64_t* row(std::int64_t i) const {
        return data_.data() + static_cast<std::size_t>(i) * stride_;
    }

    bool all_zero() const;
    std::uint64_t popcount() const;
    bool padding_clean() const;  // normal-form check (tests)

    // Copy out the h x w window with top-left corner (r0, c0). Any bit
    // alignment is allowed; word-aligned columns take a memcpy fast path.
    BitMatrix extract(std::int64_t r0, std::int64_t c0, std::int64_t h, std::int64_t w) const;
    // Overwrite the window at (r0, c0) with src.
    void paste(const BitMatrix& src, std::int64_t r0, std::int64_t c0);

    bool operator==(const BitMatrix&) const = default;

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

// Boolean product: C[i][j] = OR_k A[i][k] AND B[k][j]. Throws std::invalid_argument
// on dimension mismatch.
BitMatrix bool_mul_naive(const BitMatrix& a, const BitMatrix& b);

// GF(2) product: same shape rules, XOR accumulation.
BitMatrix gf2_mul_naive(const BitMatrix& a, const BitMatrix& b);

// GF(2) product by classical Strassen recursion. Requires square n x n inputs
// with n = base * 2^t for some integer t >= 0; recurses down to `base`.
BitMatrix gf2_mul_strassen(const BitMatrix& a, const BitMatrix& b, std::int64_t base);

// Elementwise helpers (same shape required).
BitMatrix xor_mat(const BitMatrix& a, const BitMatrix& b);
BitMatrix or_mat(const BitMatrix& a, const BitMatrix& b);
BitMatrix and_mat(const BitMatrix& a, const BitMatrix& b);
// True iff every set bit of a is also set in b.
bool is_subset(const BitMatrix& a, const BitMatrix& b);

// BMAT/1 text format:
//   BMAT 1
//   <rows> <cols>
//   <rows> lines of exactly <cols> characters from {0,1}
// Each line ends with '\n'; nothing may follow the last row. The parser is
// strict and throws std::runtime_error with a line-numbered message.
std::string to_bmat(const BitMatrix& m);
BitMatrix parse_bmat(std::string_view text);
BitMatrix load_bmat(const std::filesystem::path& path);
void save_bmat(const std::filesystem::path& path, const BitMatrix& m);

// Write-temp-then-rename, same directory as the destination.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace obmm
