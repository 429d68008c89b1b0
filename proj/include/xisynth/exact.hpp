#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "xisynth/bigint.hpp"
#include "xisynth/error.hpp"
#include "xisynth/intmatrix.hpp"
#include "xisynth/numberfield.hpp"

namespace xisynth {

/// Matrix with entries in O_E, stored as a flat array of coordinate vectors.
class OMatrix {
  public:
    OMatrix() = default;
    OMatrix(const FieldSpec& f, std::size_t rows, std::size_t cols)
        : field_(&f), rows_(rows), cols_(cols), data_(rows * cols * f.degree) {}

    static OMatrix identity(const FieldSpec& f, std::size_t n) {
        OMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.coord(i, i, 0) = 1;
        return m;
    }

    const FieldSpec& field() const { return *field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int degree() const noexcept { return field_->degree; }

    BigInt* entry(std::size_t r, std::size_t c) { return &data_[(r * cols_ + c) * field_->degree]; }
    const BigInt* entry(std::size_t r, std::size_t c) const { return &data_[(r * cols_ + c) * field_->degree]; }
    BigInt& coord(std::size_t r, std::size_t c, int k) { return entry(r, c)[k]; }
    const BigInt& coord(std::size_t r, std::size_t c, int k) const { return entry(r, c)[k]; }

    RingElem at(std::size_t r, std::size_t c) const {
        const BigInt* e = entry(r, c);
        return RingElem(std::vector<BigInt>(e, e + field_->degree));
    }
    void set(std::size_t r, std::size_t c, const RingElem& x) {
        check_length(x, *field_);
        std::copy(x.coords.begin(), x.coords.end(), entry(r, c));
    }

    std::vector<BigInt>& data() noexcept { return data_; }
    const std::vector<BigInt>& data() const noexcept { return data_; }

    bool is_zero() const {
        for (const auto& c : data_)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const OMatrix& a, const OMatrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

  private:
    const FieldSpec* field_ = nullptr;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

namespace detail {

/// out += x * y for coordinate arrays of length d.
inline void mul_acc(const FieldSpec& f, const BigInt* x, const BigInt* y, BigInt* out) {
    const int d = f.degree;
    for (int i = 0; i < d; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < d; ++j) {
            if (y[j] == 0) continue;
            BigInt prod = x[i] * y[j];
            for (const auto& [k, c] : f.terms[i * d + j]) {
                if (c == 1)
                    out[k] += prod;
                else if (c == -1)
                    out[k] -= prod;
                else
                    out[k] += c * prod;
            }
        }
    }
}

inline bool xi_divides_coords(const FieldSpec& f, const BigInt* x) {
    BigInt s = 0;
    for (int j = 0; j < f.degree; ++j)
        if (f.residue[j]) s += x[j];
    return is_even(s);
}

}  // namespace detail

inline OMatrix operator*(const OMatrix& a, const OMatrix& b) {
    require(&a.field() == &b.field(), ErrorCode::kFieldMismatch, "matrix product across fields");
    require(a.cols() == b.rows(), ErrorCode::kDimension, "matrix product: inner dimensions differ");
    const FieldSpec& f = a.field();
    OMatrix out(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const BigInt* aik = a.entry(i, k);
            bool zero = std::all_of(aik, aik + f.degree, [](const BigInt& v) { return v == 0; });
            if (zero) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) detail::mul_acc(f, aik, b.entry(k, j), out.entry(i, j));
        }
    return out;
}

/// Multiplies every entry by xi^t.
inline OMatrix times_xi_power(OMatrix m, int t) {
    if (t == 0 || m.rows() * m.cols() == 0) return m;
    const FieldSpec& f = m.field();
    RingElem x = xi_power(f, t);
    const int d = f.degree;
    std::vector<BigInt> tmp(d);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::fill(tmp.begin(), tmp.end(), BigInt(0));
            detail::mul_acc(f, m.entry(r, c), x.coords.data(), tmp.data());
            std::copy(tmp.begin(), tmp.end(), m.entry(r, c));
        }
    return m;
}

/// Minimum xi-valuation over all entries (kInfiniteValuation for the zero matrix).
inline Valuation min_xi_valuation(const OMatrix& m) {
    Valuation best = kInfiniteValuation;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            Valuation v = xi_valuation(m.at(r, c), m.field());
            best = std::min(best, v);
            if (best == 0) return 0;
        }
    return best;
}

/// Divides every entry by xi^t; throws not-divisible if impossible.
inline OMatrix divide_by_xi_power(const OMatrix& m, int t) {
    OMatrix out = m;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.set(r, c, divide_by_xi(m.at(r, c), t, m.field()));
    return out;
}

/// Integer block matrix replacing each entry x by its representation matrix M_x.
inline IntMatrix z_of_matrix(const OMatrix& a) {
    const FieldSpec& f = a.field();
    const int d = f.degree;
    IntMatrix z(a.rows() * d, a.cols() * d);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            const BigInt* x = a.entry(r, c);
            for (int i = 0; i < d; ++i) {
                if (x[i] == 0) continue;
                for (int j = 0; j < d; ++j)
                    for (const auto& [k, s] : f.terms[i * d + j]) z(r * d + k, c * d + j) += s * x[i];
            }
        }
    return z;
}

/// Element num / xi^k of the xi-ring, kept in reduced form.
struct ExactScalar {
    RingElem num;
    int denom_exp = 0;

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.denom_exp == b.denom_exp && a.num == b.num;
    }
};

inline ExactScalar make_scalar(const FieldSpec& f, RingElem num, int k = 0) {
    check_length(num, f);
    if (num.is_zero()) return {std::move(num), 0};
    while (k > 0 && xi_divides(num, f)) {
        num = detail::exact_div_xi(num, f);
        --k;
    }
    while (k < 0) {
        num = mul(num, f.xi, f);
        ++k;
    }
    return {std::move(num), k};
}

inline ExactScalar scalar_mul(const ExactScalar& a, const ExactScalar& b, const FieldSpec& f) {
    return make_scalar(f, mul(a.num, b.num, f), a.denom_exp + b.denom_exp);
}

inline ExactScalar scalar_add(const ExactScalar& a, const ExactScalar& b, const FieldSpec& f) {
    int k = std::max(a.denom_exp, b.denom_exp);
    RingElem x = a.denom_exp < k ? mul(a.num, xi_power(f, k - a.denom_exp), f) : a.num;
    RingElem y = b.denom_exp < k ? mul(b.num, xi_power(f, k - b.denom_exp), f) : b.num;
    return make_scalar(f, add(x, y), k);
}

inline ExactScalar scalar_neg(const ExactScalar& a) { return {neg(a.num), a.denom_exp}; }

/// Inverse of a unit of O_E.
inline RingElem unit_inverse(const RingElem& w, const FieldSpec& f) {
    auto sol = rational_solve(repr_matrix(w, f), ring_one(f).coords);
    require(sol.has_value(), ErrorCode::kNotDivisible, "element is not invertible");
    RingElem out = ring_zero(f);
    for (int k = 0; k < f.degree; ++k) {
        require(boost::multiprecision::denominator((*sol)[k]) == 1, ErrorCode::kNotDivisible,
                "element is not a unit times a power of xi");
        out.coords[k] = boost::multiprecision::numerator((*sol)[k]);
    }
    return out;
}

/// 1/x inside the xi-ring; x must be a unit times a power of xi.
inline ExactScalar scalar_inverse(const ExactScalar& a, const FieldSpec& f) {
    Valuation v = xi_valuation(a.num, f);
    require(v != kInfiniteValuation, ErrorCode::kNotDivisible, "division by zero");
    RingElem w = divide_by_xi(a.num, v, f);
    RingElem winv = unit_inverse(w, f);
    // a = w xi^v / xi^k, so 1/a = winv xi^k / xi^v
    return make_scalar(f, mul(winv, xi_power(f, a.denom_exp), f), v);
}

/// Matrix over the xi-ring: an O_E numerator with one shared denominator xi^k.
/// Canonical: k = 0 or some numerator entry is not divisible by xi.
class ExactMatrix {
  public:
    ExactMatrix() = default;
    ExactMatrix(OMatrix num, int denom_exp) : num_(std::move(num)), k_(denom_exp) { canonicalize(); }
    ExactMatrix(const FieldSpec& f, std::size_t rows, std::size_t cols) : num_(f, rows, cols), k_(0) {}

    static ExactMatrix identity(const FieldSpec& f, std::size_t n) { return ExactMatrix(OMatrix::identity(f, n), 0); }

    static ExactMatrix from_scalars(const FieldSpec& f, std::size_t rows, std::size_t cols,
                                    const std::vector<ExactScalar>& entries) {
        require(entries.size() == rows * cols, ErrorCode::kDimension, "from_scalars: entry count mismatch");
        int k = 0;
        for (const auto& e : entries) k = std::max(k, e.denom_exp);
        OMatrix num(f, rows, cols);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            RingElem x = entries[i].num;
            check_length(x, f);
            int shift = k - entries[i].denom_exp;
            if (shift > 0) x = mul(x, xi_power(f, shift), f);
            num.set(i / cols, i % cols, x);
        }
        return ExactMatrix(std::move(num), k);
    }

    /// Integer matrix interpreted inside the field.
    static ExactMatrix from_integers(const FieldSpec& f, const std::vector<std::vector<long long>>& rows) {
        std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        OMatrix num(f, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            require(rows[i].size() == c, ErrorCode::kDimension, "ragged matrix literal");
            for (std::size_t j = 0; j < c; ++j) num.coord(i, j, 0) = rows[i][j];
        }
        return ExactMatrix(std::move(num), 0);
    }

    const FieldSpec& field() const { return num_.field(); }
    std::size_t rows() const noexcept { return num_.rows(); }
    std::size_t cols() const noexcept { return num_.cols(); }
    int denom_exp() const noexcept { return k_; }
    const OMatrix& numerator() const noexcept { return num_; }

    ExactScalar at(std::size_t r, std::size_t c) const { return make_scalar(field(), num_.at(r, c), k_); }

    /// xi^t * this, with t possibly negative.
    ExactMatrix times_xi(int t) const {
        if (t <= 0) return ExactMatrix(num_, k_ - t);
        int cancel = std::min(t, k_);
        return ExactMatrix(times_xi_power(num_, t - cancel), k_ - cancel);
    }

    /// Numerator of xi^k * this for a caller-chosen k >= denom_exp.
    OMatrix scaled_numerator(int k) const {
        require(k >= k_, ErrorCode::kNotDivisible, "scaled_numerator: exponent below denominator");
        return times_xi_power(num_, k - k_);
    }

    ExactMatrix columns(std::size_t first, std::size_t count) const {
        require(first + count <= cols(), ErrorCode::kDimension, "column range out of bounds");
        OMatrix out(field(), rows(), count);
        for (std::size_t r = 0; r < rows(); ++r)
            for (std::size_t c = 0; c < count; ++c)
                std::copy(num_.entry(r, first + c), num_.entry(r, first + c) + field().degree, out.entry(r, c));
        return ExactMatrix(std::move(out), k_);
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) { return a.k_ == b.k_ && a.num_ == b.num_; }

    friend std::ostream& operator<<(std::ostream& os, const ExactMatrix& m) {
        os << "xi^-" << m.k_ << " * [";
        for (std::size_t r = 0; r < m.rows(); ++r) {
            os << (r ? ", [" : "[");
            for (std::size_t c = 0; c < m.cols(); ++c) {
                os << (c ? ", (" : "(");
                for (int k = 0; k < m.field().degree; ++k) os << (k ? "," : "") << m.num_.coord(r, c, k);
                os << ')';
            }
            os << ']';
        }
        return os << ']';
    }

  private:
    void canonicalize() {
        const FieldSpec& f = num_.field();
        if (num_.is_zero()) {
            k_ = 0;
            return;
        }
        if (k_ < 0) {
            num_ = times_xi_power(std::move(num_), -k_);
            k_ = 0;
        }
        auto& data = num_.data();
        const std::size_t entries = num_.rows() * num_.cols();
        while (k_ >= f.degree &&
               std::all_of(data.begin(), data.end(), [](const BigInt& v) { return is_even(v); })) {
            for (std::size_t e = 0; e < entries; ++e) {
                RingElem x(std::vector<BigInt>(data.begin() + e * f.degree, data.begin() + (e + 1) * f.degree));
                x = detail::exact_div_xi_d(x, f);
                std::copy(x.coords.begin(), x.coords.end(), data.begin() + e * f.degree);
            }
            k_ -= f.degree;
        }
        while (k_ > 0) {
            for (std::size_t e = 0; e < entries; ++e)
                if (!detail::xi_divides_coords(f, &data[e * f.degree])) return;
            for (std::size_t e = 0; e < entries; ++e) {
                RingElem x(std::vector<BigInt>(data.begin() + e * f.degree, data.begin() + (e + 1) * f.degree));
                x = detail::exact_div_xi(x, f);
                std::copy(x.coords.begin(), x.coords.end(), data.begin() + e * f.degree);
            }
            --k_;
        }
    }

    OMatrix num_;
    int k_ = 0;
};

inline ExactMatrix matmul(const ExactMatrix& a, const ExactMatrix& b) {
    return ExactMatrix(a.numerator() * b.numerator(), a.denom_exp() + b.denom_exp());
}

inline ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) { return matmul(a, b); }

inline ExactMatrix dagger(const ExactMatrix& a) {
    const FieldSpec& f = a.field();
    OMatrix out(f, a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out.set(c, r, conj(a.numerator().at(r, c), f));
    if (a.denom_exp() == 0 || f.totally_real) return ExactMatrix(std::move(out), a.denom_exp());
    // x* / (xi*)^k = x* (xi / xi*)^k / xi^k, and xi / xi* = conj(xi* / xi) is a unit.
    RingElem u = conj(divide_by_xi(conj(f.xi, f), 1, f), f);
    RingElem uk = ring_one(f);
    for (int i = 0; i < a.denom_exp(); ++i) uk = mul(uk, u, f);
    if (!(uk == ring_one(f)))
        for (std::size_t r = 0; r < out.rows(); ++r)
            for (std::size_t c = 0; c < out.cols(); ++c) out.set(r, c, mul(out.at(r, c), uk, f));
    return ExactMatrix(std::move(out), a.denom_exp());
}

inline ExactMatrix add(const ExactMatrix& a, const ExactMatrix& b) {
    require(&a.field() == &b.field(), ErrorCode::kFieldMismatch, "matrix sum across fields");
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kDimension, "matrix sum: shapes differ");
    int k = std::max(a.denom_exp(), b.denom_exp());
    OMatrix na = a.scaled_numerator(k), nb = b.scaled_numerator(k);
    for (std::size_t i = 0; i < na.data().size(); ++i) na.data()[i] += nb.data()[i];
    return ExactMatrix(std::move(na), k);
}

inline ExactMatrix negate(const ExactMatrix& a) {
    OMatrix n = a.numerator();
    for (auto& v : n.data()) v = -v;
    return ExactMatrix(std::move(n), a.denom_exp());
}

inline ExactMatrix sub(const ExactMatrix& a, const ExactMatrix& b) { return add(a, negate(b)); }

inline ExactMatrix scalar_times(const ExactScalar& s, const ExactMatrix& a) {
    const FieldSpec& f = a.field();
    OMatrix n = a.numerator();
    for (std::size_t r = 0; r < n.rows(); ++r)
        for (std::size_t c = 0; c < n.cols(); ++c) n.set(r, c, mul(n.at(r, c), s.num, f));
    return ExactMatrix(std::move(n), a.denom_exp() + s.denom_exp);
}

inline ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b) {
    require(&a.field() == &b.field(), ErrorCode::kFieldMismatch, "tensor product across fields");
    const FieldSpec& f = a.field();
    const int d = f.degree;
    OMatrix out(f, a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const BigInt* x = a.numerator().entry(i, j);
            if (std::all_of(x, x + d, [](const BigInt& v) { return v == 0; })) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    detail::mul_acc(f, x, b.numerator().entry(k, l), out.entry(i * b.rows() + k, j * b.cols() + l));
        }
    return ExactMatrix(std::move(out), a.denom_exp() + b.denom_exp());
}

inline bool is_identity(const ExactMatrix& a) {
    return a.rows() == a.cols() && a == ExactMatrix::identity(a.field(), a.rows());
}

inline bool is_isometry(const ExactMatrix& a) {
    if (a.rows() < a.cols()) return false;
    return is_identity(matmul(dagger(a), a));
}

/// Sub-block of rows [r0, r0+nr) and columns [c0, c0+nc).
inline ExactMatrix block(const ExactMatrix& a, std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) {
    require(r0 + nr <= a.rows() && c0 + nc <= a.cols(), ErrorCode::kDimension, "block out of range");
    OMatrix out(a.field(), nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) out.set(r, c, a.numerator().at(r0 + r, c0 + c));
    return ExactMatrix(std::move(out), a.denom_exp());
}

}  // namespace xisynth
