#pragma once

#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "obmm/rng.hpp"

namespace obmm {

// Dense matrix over an unsigned machine word type, arithmetic mod 2^bits(T).
// Used by the ring-generic tests and oracles; not performance-critical.
template <class T>
class DenseMatrix {
    static_assert(std::is_unsigned_v<T>);

public:
    DenseMatrix() = default;
    DenseMatrix(std::int64_t rows, std::int64_t cols) : rows_(rows), cols_(cols) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("matrix dimensions must be positive");
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), T(0));
    }

    static DenseMatrix random(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
        DenseMatrix m(rows, cols);
        for (std::size_t i = 0; i < m.data_.size(); ++i)
            m.data_[i] = static_cast<T>(rng::at(seed, 0, i));
        return m;
    }

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }

    T get(std::int64_t i, std::int64_t j) const { return data_[idx(i, j)]; }
    void set(std::int64_t i, std::int64_t j, T v) { data_[idx(i, j)] = v; }

    DenseMatrix extract(std::int64_t r0, std::int64_t c0, std::int64_t h, std::int64_t w) const {
        if (r0 < 0 || c0 < 0 || h <= 0 || w <= 0 || r0 + h > rows_ || c0 + w > cols_)
            throw std::invalid_argument("extract window out of range");
        DenseMatrix out(h, w);
        for (std::int64_t r = 0; r < h; ++r)
            for (std::int64_t c = 0; c < w; ++c) out.set(r, c, get(r0 + r, c0 + c));
        return out;
    }

    void paste(const DenseMatrix& src, std::int64_t r0, std::int64_t c0) {
        if (r0 < 0 || c0 < 0 || r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_)
            throw std::invalid_argument("paste window out of range");
        for (std::int64_t r = 0; r < src.rows_; ++r)
            for (std::int64_t c = 0; c < src.cols_; ++c) set(r0 + r, c0 + c, src.get(r, c));
    }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t idx(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<T> data_;
};

// All arithmetic goes through uint64 intermediates to dodge the signed
// promotion trap on small unsigned types, then truncates back (mod 2^w).
template <class T>
DenseMatrix<T> dense_add(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("dense_add: shapes disagree");
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t j = 0; j < a.cols(); ++j)
            c.set(i, j, static_cast<T>(std::uint64_t(a.get(i, j)) + std::uint64_t(b.get(i, j))));
    return c;
}

template <class T>
DenseMatrix<T> dense_sub(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("dense_sub: shapes disagree");
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t j = 0; j < a.cols(); ++j)
            c.set(i, j, static_cast<T>(std::uint64_t(a.get(i, j)) - std::uint64_t(b.get(i, j))));
    return c;
}

template <class T>
DenseMatrix<T> dense_mul_naive(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("dense_mul_naive: inner dims disagree");
    DenseMatrix<T> c(a.rows(), b.cols());
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t k = 0; k < a.cols(); ++k) {
            const std::uint64_t av = a.get(i, k);
            if (!av) continue;
            for (std::int64_t j = 0; j < b.cols(); ++j)
                c.set(i, j,
                      static_cast<T>(std::uint64_t(c.get(i, j)) + av * std::uint64_t(b.get(k, j))));
        }
    return c;
}

}  // namespace obmm
