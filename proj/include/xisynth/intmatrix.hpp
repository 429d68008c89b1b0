#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "xisynth/bigint.hpp"
#include "xisynth/error.hpp"

namespace xisynth {

using BigRational = boost::multiprecision::cpp_rational;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            require(r.size() == cols_, ErrorCode::kDimension, "ragged integer matrix literal");
            for (long long v : r) data_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<BigInt>& data() const noexcept { return data_; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

    /// row[dst] += factor * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const BigInt& factor, std::size_t from_col = 0) {
        if (factor == 0) return;
        for (std::size_t c = from_col; c < cols_; ++c) (*this)(dst, c) += factor * (*this)(src, c);
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        require(a.cols_ == b.rows_, ErrorCode::kDimension, "integer matrix product: inner dimensions differ");
        IntMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const BigInt& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
        os << '[';
        for (std::size_t r = 0; r < m.rows_; ++r) {
            os << (r ? ", [" : "[");
            for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? ", " : "") << m(r, c);
            os << ']';
        }
        return os << ']';
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

/// Determinant by rational Gaussian elimination.
inline BigInt determinant(const IntMatrix& a) {
    require(a.rows() == a.cols(), ErrorCode::kDimension, "determinant of non-square matrix");
    const std::size_t n = a.rows();
    std::vector<BigRational> m(a.data().begin(), a.data().end());
    BigRational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p * n + c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(m[p * n + k], m[c * n + k]);
            det = -det;
        }
        det *= m[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r * n + c] == 0) continue;
            BigRational f = m[r * n + c] / m[c * n + c];
            for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
        }
    }
    return boost::multiprecision::numerator(det);
}

/// Solves a x = b over the rationals; nullopt when a is singular.
inline std::optional<std::vector<BigRational>> rational_solve(const IntMatrix& a, const std::vector<BigInt>& b) {
    require(a.rows() == a.cols() && b.size() == a.rows(), ErrorCode::kDimension, "rational_solve: bad shapes");
    const std::size_t n = a.rows();
    const std::size_t w = n + 1;
    std::vector<BigRational> m(n * w);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) m[r * w + c] = a(r, c);
        m[r * w + n] = b[r];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p * w + c] == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != c)
            for (std::size_t k = 0; k < w; ++k) std::swap(m[p * w + k], m[c * w + k]);
        BigRational inv = 1 / m[c * w + c];
        for (std::size_t k = c; k < w; ++k) m[c * w + k] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r * w + c] == 0) continue;
            BigRational f = m[r * w + c];
            for (std::size_t k = c; k < w; ++k) m[r * w + k] -= f * m[c * w + k];
        }
    }
    std::vector<BigRational> x(n);
    for (std::size_t r = 0; r < n; ++r) x[r] = m[r * w + n];
    return x;
}

/// Row-style Hermite Normal Form H = V A with V unimodular.
///
/// Echelon shape with positive pivots, entries above each pivot reduced into
/// [0, pivot), zero rows last. Pivot search takes the smallest absolute value,
/// ties going to the lowest row index.
inline IntMatrix hnf_integer(IntMatrix a) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::size_t r = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        while (true) {
            std::size_t best = rows;
            for (std::size_t i = r; i < rows; ++i) {
                if (a(i, c) == 0) continue;
                if (best == rows || abs(a(i, c)) < abs(a(best, c))) best = i;
            }
            if (best == rows) break;
            a.swap_rows(r, best);
            bool done = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (a(i, c) == 0) continue;
                BigInt q = floor_div(a(i, c), a(r, c));
                a.add_row_multiple(i, r, -q, c);
                if (a(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (a(r, c) == 0) continue;
        if (a(r, c) < 0)
            for (std::size_t k = c; k < cols; ++k) a(r, k) = -a(r, k);
        pivots.emplace_back(r, c);
        ++r;
    }
    for (const auto& [pr, pc] : pivots) {
        const BigInt& pivot = a(pr, pc);
        for (std::size_t i = 0; i < pr; ++i) {
            BigInt q = floor_div(a(i, pc), pivot);
            a.add_row_multiple(i, pr, -q, pc);
        }
    }
    return a;
}

}  // namespace xisynth
