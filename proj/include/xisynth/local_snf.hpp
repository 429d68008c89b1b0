#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "xisynth/bigint.hpp"
#include "xisynth/error.hpp"
#include "xisynth/exact.hpp"
#include "xisynth/modular.hpp"
#include "xisynth/numberfield.hpp"

namespace xisynth {

/// The finite ring O_E / 2^K O_E with elements stored as d coordinates in [0, 2^K).
/// Elements are treated as their integer lifts, so exact divisions by powers of xi
/// can be carried out on the lift and then reduced again.
template <class Arith>
class LocalRing {
  public:
    using Word = typename Arith::Word;

    LocalRing(const FieldSpec& f, int bits) : f_(f), a_(bits), d_(f.degree) {
        require(d_ <= kMaxDegree, ErrorCode::kUnsupported, "field degree above 8");
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                for (const auto& [k, c] : f.terms[i * d_ + j]) terms_.push_back({i, j, k, Arith::raw_int(c)});
        c0_.resize(d_);
        uinv_.resize(d_);
        for (int k = 0; k < d_; ++k) {
            c0_[k] = Arith::raw_from_big(f.xi_pow_d_minus_1_unit_inv.coords[k]);
            uinv_[k] = Arith::raw_from_big(f.unit_inv.coords[k]);
        }
    }

    const Arith& arith() const { return a_; }
    int degree() const { return d_; }
    int bits() const { return a_.bits; }

    /// Unreduced product; wraps modulo the word size for machine words.
    void raw_mul(const Word* x, const Word* y, Word* out) const {
        for (int k = 0; k < d_; ++k) out[k] = 0;
        for (const auto& t : terms_) {
            if (Arith::is_zero(x[t.i]) || Arith::is_zero(y[t.j])) continue;
            out[t.k] += t.c * (x[t.i] * y[t.j]);
        }
    }

    void mul(const Word* x, const Word* y, Word* out) const {
        raw_mul(x, y, out);
        for (int k = 0; k < d_; ++k) out[k] = a_.reduce(out[k]);
    }

    /// Valuation of the lift, or kInfiniteValuation once it reaches d*(K-1).
    Valuation valuation(const Word* x) const {
        int t = a_.bits;
        for (int k = 0; k < d_; ++k) t = std::min(t, a_.twos(x[k]));
        if (t >= a_.bits - 1) return kInfiniteValuation;
        Buffer y, tmp;
        for (int k = 0; k < d_; ++k) y[k] = Arith::shr(x[k], t);
        int r = 0;
        while (r < d_ && divisible(y.data())) {
            div_xi(y.data(), tmp.data());
            std::swap(y, tmp);
            ++r;
        }
        return d_ * t + r;
    }

    /// out = x / xi^v for a lift divisible by xi^v.
    void divide_xi_power(const Word* x, int v, Word* out) const {
        const int t = v / d_;
        Buffer y, tmp;
        for (int k = 0; k < d_; ++k) y[k] = Arith::shr(x[k], t);
        for (int s = 0; s < t; ++s) {
            mul(y.data(), uinv_.data(), tmp.data());
            std::swap(y, tmp);
        }
        for (int s = 0; s < v % d_; ++s) {
            div_xi(y.data(), tmp.data());
            std::swap(y, tmp);
        }
        std::copy(y.begin(), y.begin() + d_, out);
    }

    /// Inverse of a unit: solve modulo 2, then Newton-lift y <- y (2 - w y).
    void inverse(const Word* w, Word* out) const {
        std::array<std::array<unsigned char, kMaxDegree + 1>, kMaxDegree> m{};
        for (const auto& t : terms_)
            if (Arith::is_odd(w[t.i]) && Arith::is_odd(t.c)) m[t.k][t.j] ^= 1;
        m[0][d_] = 1;
        for (int c = 0, r = 0; c < d_; ++c, ++r) {
            int p = r;
            while (p < d_ && !m[p][c]) ++p;
            if (p == d_) fail(ErrorCode::kInvariant, "local SNF pivot is not a unit");
            std::swap(m[p], m[r]);
            for (int i = 0; i < d_; ++i)
                if (i != r && m[i][c])
                    for (int k = c; k <= d_; ++k) m[i][k] ^= m[r][k];
        }
        Buffer y, wy, corr;
        for (int k = 0; k < d_; ++k) y[k] = a_.from_int(m[k][d_]);
        for (int precision = 1; precision < a_.bits; precision *= 2) {
            mul(w, y.data(), wy.data());
            for (int k = 0; k < d_; ++k) wy[k] = a_.sub(k == 0 ? a_.from_int(2) : a_.from_int(0), wy[k]);
            mul(y.data(), wy.data(), corr.data());
            std::swap(y, corr);
        }
        std::copy(y.begin(), y.begin() + d_, out);
    }

  private:
    static constexpr int kMaxDegree = 8;
    using Buffer = std::array<Word, kMaxDegree>;

    struct Term {
        int i, j, k;
        Word c;
    };

    bool divisible(const Word* y) const {
        Word s = 0;
        for (int k = 0; k < d_; ++k)
            if (f_.residue[k]) s += y[k];
        return !Arith::is_odd(s);
    }

    void div_xi(const Word* y, Word* out) const {
        raw_mul(y, c0_.data(), out);
        for (int k = 0; k < d_; ++k) out[k] = a_.reduce(Arith::shr(out[k], 1));
    }

    const FieldSpec& f_;
    Arith a_;
    int d_;
    std::vector<Term> terms_;
    std::vector<Word> c0_;
    std::vector<Word> uinv_;
};

namespace detail {

/// Row-major coefficients (entry (r, c), coordinate k at (r * cols + c) * d + k).
template <class T>
struct CoeffView {
    const FieldSpec* field;
    std::size_t rows, cols;
    const T* data;
};

inline CoeffView<BigInt> view(const OMatrix& a) { return {&a.field(), a.rows(), a.cols(), a.data().data()}; }

template <class Arith, class T>
std::vector<Valuation> local_snf(const CoeffView<T>& a, int bits) {
    using Word = typename Arith::Word;
    const FieldSpec& f = *a.field;
    const int d = f.degree;
    LocalRing<Arith> ring(f, bits);
    const Arith& ar = ring.arith();
    const std::size_t nr = a.rows, nc = a.cols;
    std::vector<Word> m(nr * nc * d);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = ar.from_value(a.data[i]);
    auto at = [&](std::size_t r, std::size_t c) { return &m[(r * nc + c) * d]; };

    std::vector<std::size_t> rows(nr), cols(nc);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::vector<Valuation> out;
    std::vector<Word> w(d), winv(d), q(d), fct(d), prod(d);
    while (!rows.empty() && !cols.empty()) {
        Valuation best = kInfiniteValuation;
        std::size_t bi = 0, bj = 0;
        for (std::size_t ii = 0; ii < rows.size() && best > 0; ++ii)
            for (std::size_t jj = 0; jj < cols.size(); ++jj) {
                Valuation v = ring.valuation(at(rows[ii], cols[jj]));
                if (v < best) {
                    best = v;
                    bi = ii;
                    bj = jj;
                    if (v == 0) break;
                }
            }
        if (best == kInfiniteValuation)
            fail(ErrorCode::kBoundExceeded, "local SNF: remaining entries exceed the working precision");
        out.push_back(best);
        const std::size_t pr = rows[bi], pc = cols[bj];
        ring.divide_xi_power(at(pr, pc), best, w.data());
        ring.inverse(w.data(), winv.data());
        for (std::size_t ii = 0; ii < rows.size(); ++ii) {
            const std::size_t r = rows[ii];
            if (r == pr) continue;
            const Word* arc = at(r, pc);
            if (std::all_of(arc, arc + d, [](const Word& x) { return Arith::is_zero(x); })) continue;
            ring.divide_xi_power(arc, best, q.data());
            ring.mul(q.data(), winv.data(), fct.data());
            for (std::size_t jj = 0; jj < cols.size(); ++jj) {
                const std::size_t c = cols[jj];
                Word* dst = at(r, c);
                if (c == pc) {
                    for (int k = 0; k < d; ++k) dst[k] = 0;
                    continue;
                }
                ring.mul(fct.data(), at(pr, c), prod.data());
                for (int k = 0; k < d; ++k) dst[k] = ar.sub(dst[k], prod[k]);
            }
        }
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(bi));
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Working precision K for a valuation bound: O_E / 2^K.
inline int local_snf_precision(const FieldSpec& f, int vmax) { return (vmax + 1 + f.degree - 1) / f.degree + 2; }

template <class T>
std::vector<Valuation> xi_local_snf_valuations(const detail::CoeffView<T>& a, int vmax) {
    require(vmax >= 0, ErrorCode::kInvalidArgument, "vmax must be non-negative");
    const int k = local_snf_precision(*a.field, vmax);
    if (k <= 61) return detail::local_snf<WordArith>(a, k);
    return detail::local_snf<BigArith>(a, k);
}

/// xi-adic valuations of the invariant factors of an O_E matrix, non-decreasing.
inline std::vector<Valuation> xi_local_snf_valuations(const OMatrix& a, int vmax) {
    return xi_local_snf_valuations(detail::view(a), vmax);
}

inline std::vector<Valuation> xi_local_snf_valuations(const ExactMatrix& a, int vmax) {
    require(a.denom_exp() == 0, ErrorCode::kNotDivisible, "local SNF needs O_E entries");
    return xi_local_snf_valuations(a.numerator(), vmax);
}

namespace detail {

inline RingElem minor_det(const OMatrix& a, const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) {
    const FieldSpec& f = a.field();
    const std::size_t n = rs.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    RingElem total = ring_zero(f);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        RingElem term = ring_one(f);
        for (std::size_t i = 0; i < n && !term.is_zero(); ++i) term = mul(term, a.at(rs[i], cs[perm[i]]), f);
        total = inversions % 2 ? sub(total, term) : add(total, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) s.push_back(i);
        out.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

}  // namespace detail

/// Reference invariant-factor valuations from gcds of minors; small matrices only.
inline std::vector<Valuation> invariant_factor_oracle_minors(const OMatrix& a) {
    require(a.rows() <= 4 && a.cols() <= 4, ErrorCode::kDimension, "minor oracle limited to 4x4");
    const std::size_t r = std::min(a.rows(), a.cols());
    std::vector<Valuation> out;
    Valuation prev = 0;
    for (std::size_t j = 1; j <= r; ++j) {
        std::vector<std::vector<std::size_t>> rsets, csets;
        detail::subsets(a.rows(), j, rsets);
        detail::subsets(a.cols(), j, csets);
        Valuation best = kInfiniteValuation;
        for (const auto& rs : rsets)
            for (const auto& cs : csets) best = std::min(best, xi_valuation(detail::minor_det(a, rs, cs), a.field()));
        if (best == kInfiniteValuation || prev == kInfiniteValuation) {
            out.push_back(kInfiniteValuation);
            prev = kInfiniteValuation;
        } else {
            out.push_back(best - prev);
            prev = best;
        }
    }
    return out;
}

inline std::vector<Valuation> invariant_factor_oracle_minors(const ExactMatrix& a) {
    require(a.denom_exp() == 0, ErrorCode::kNotDivisible, "minor oracle needs O_E entries");
    return invariant_factor_oracle_minors(a.numerator());
}

}  // namespace xisynth
