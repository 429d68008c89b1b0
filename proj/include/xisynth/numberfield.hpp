#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xisynth/bigint.hpp"
#include "xisynth/error.hpp"
#include "xisynth/intmatrix.hpp"

namespace xisynth {

/// Element of O_E given by its coordinates in the integral power basis.
struct RingElem {
    std::vector<BigInt> coords;

    RingElem() = default;
    explicit RingElem(std::vector<BigInt> c) : coords(std::move(c)) {}
    RingElem(std::initializer_list<long long> c) : coords(c.begin(), c.end()) {}

    std::size_t size() const noexcept { return coords.size(); }
    const BigInt& operator[](std::size_t i) const { return coords[i]; }
    BigInt& operator[](std::size_t i) { return coords[i]; }

    bool is_zero() const {
        for (const auto& c : coords)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const RingElem& a, const RingElem& b) { return a.coords == b.coords; }
};

struct FieldSpec {
    std::string name;
    int degree = 0;
    int p = 2;
    bool totally_real = false;
    std::vector<std::int64_t> mul_table;  // b_i b_j = sum_k mul_table[(i*d+j)*d+k] b_k
    IntMatrix conj_matrix;                // vec(x*) = conj_matrix vec(x)
    RingElem xi;
    RingElem unit;      // xi^d = p * unit
    RingElem unit_inv;

    // Derived at construction.
    RingElem xi_pow_d_minus_1_unit_inv;  // x / xi = x * this / p
    std::vector<int> residue;            // x divisible by xi iff sum residue_j x_j is even
    std::vector<std::vector<std::pair<int, std::int64_t>>> terms;  // nonzero (k, c) per i*d+j

    std::int64_t structure_constant(int i, int j, int k) const {
        return mul_table[(static_cast<std::size_t>(i) * degree + j) * degree + k];
    }

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.name == b.name; }
};

namespace detail {

/// Structure constants of Z[x]/(minpoly) in the basis 1, x, ..., x^{d-1}.
/// minpoly lists a_0..a_{d-1} of the monic x^d + a_{d-1}x^{d-1} + ... + a_0.
inline std::vector<std::int64_t> power_basis_table(const std::vector<std::int64_t>& minpoly) {
    const int d = static_cast<int>(minpoly.size());
    std::vector<std::vector<std::int64_t>> powers;  // x^m reduced, m < 2d-1
    for (int m = 0; m < 2 * d - 1; ++m) {
        std::vector<std::int64_t> v(d, 0);
        if (m < d) {
            v[m] = 1;
        } else {
            const auto& prev = powers[m - 1];
            std::int64_t top = prev[d - 1];
            for (int k = d - 1; k >= 1; --k) v[k] = prev[k - 1];
            v[0] = 0;
            for (int k = 0; k < d; ++k) v[k] -= top * minpoly[k];
        }
        powers.push_back(std::move(v));
    }
    std::vector<std::int64_t> table(static_cast<std::size_t>(d) * d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) table[(static_cast<std::size_t>(i) * d + j) * d + k] = powers[i + j][k];
    return table;
}

inline RingElem raw_mul(const FieldSpec& f, const RingElem& x, const RingElem& y) {
    const int d = f.degree;
    RingElem out{std::vector<BigInt>(d)};
    for (int i = 0; i < d; ++i) {
        if (x.coords[i] == 0) continue;
        for (int j = 0; j < d; ++j) {
            if (y.coords[j] == 0) continue;
            BigInt prod = x.coords[i] * y.coords[j];
            for (const auto& [k, c] : f.terms[i * d + j]) out.coords[k] += c * prod;
        }
    }
    return out;
}

inline RingElem basis_vector(int d, int j) {
    RingElem e{std::vector<BigInt>(d)};
    e.coords[j] = 1;
    return e;
}

inline void validate_field(const FieldSpec& f) {
    const int d = f.degree;
    auto fail_if = [&](bool bad, const char* what) {
        if (bad) fail(ErrorCode::kInvariant, f.name + ": " + what);
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            auto bi = basis_vector(d, i), bj = basis_vector(d, j);
            fail_if(raw_mul(f, bi, bj) != raw_mul(f, bj, bi), "multiplication not commutative");
            for (int k = 0; k < d; ++k) {
                auto bk = basis_vector(d, k);
                fail_if(raw_mul(f, raw_mul(f, bi, bj), bk) != raw_mul(f, bi, raw_mul(f, bj, bk)),
                        "multiplication not associative");
            }
        }
    fail_if(!(f.conj_matrix * f.conj_matrix == IntMatrix::identity(d)), "conjugation not an involution");
    if (f.totally_real) fail_if(!(f.conj_matrix == IntMatrix::identity(d)), "real field with nontrivial conjugation");
    auto conj_of = [&](const RingElem& x) {
        RingElem y{std::vector<BigInt>(d)};
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) y.coords[r] += f.conj_matrix(r, c) * x.coords[c];
        return y;
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            auto bi = basis_vector(d, i), bj = basis_vector(d, j);
            fail_if(conj_of(raw_mul(f, bi, bj)) != raw_mul(f, conj_of(bi), conj_of(bj)),
                    "conjugation not multiplicative");
        }
    RingElem xd = basis_vector(d, 0);
    for (int k = 0; k < d; ++k) xd = raw_mul(f, xd, f.xi);
    RingElem pu = f.unit;
    for (auto& c : pu.coords) c *= f.p;
    fail_if(xd != pu, "xi^d differs from p * unit");
    fail_if(raw_mul(f, f.unit, f.unit_inv) != basis_vector(d, 0), "unit_inv is not the inverse of unit");
}

inline FieldSpec make_field(std::string name, const std::vector<std::int64_t>& minpoly, IntMatrix conj,
                            RingElem xi, bool totally_real) {
    FieldSpec f;
    f.name = std::move(name);
    f.degree = static_cast<int>(minpoly.size());
    f.p = 2;
    f.totally_real = totally_real;
    f.mul_table = power_basis_table(minpoly);
    f.conj_matrix = std::move(conj);
    f.xi = std::move(xi);
    const int d = f.degree;
    f.terms.resize(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (auto c = f.structure_constant(i, j, k); c != 0) f.terms[i * d + j].emplace_back(k, c);

    RingElem xd = basis_vector(d, 0);
    for (int k = 0; k < d; ++k) xd = raw_mul(f, xd, f.xi);
    f.unit = xd;
    for (auto& c : f.unit.coords) {
        if (!is_even(c)) fail(ErrorCode::kInvariant, f.name + ": xi^d is not divisible by p");
        c /= f.p;
    }
    IntMatrix mu(d, d);
    for (int j = 0; j < d; ++j) {
        auto col = raw_mul(f, f.unit, basis_vector(d, j));
        for (int r = 0; r < d; ++r) mu(r, j) = col.coords[r];
    }
    std::vector<BigInt> e1(d);
    e1[0] = 1;
    auto sol = rational_solve(mu, e1);
    if (!sol) fail(ErrorCode::kInvariant, f.name + ": xi^d / p is not invertible");
    f.unit_inv.coords.resize(d);
    for (int r = 0; r < d; ++r) {
        if (boost::multiprecision::denominator((*sol)[r]) != 1)
            fail(ErrorCode::kInvariant, f.name + ": xi^d / p is not a unit");
        f.unit_inv.coords[r] = boost::multiprecision::numerator((*sol)[r]);
    }

    RingElem c0 = basis_vector(d, 0);
    for (int k = 0; k < d - 1; ++k) c0 = raw_mul(f, c0, f.xi);
    f.xi_pow_d_minus_1_unit_inv = raw_mul(f, c0, f.unit_inv);
    f.residue.assign(d, 0);
    for (int j = 0; j < d; ++j) {
        auto img = raw_mul(f, basis_vector(d, j), f.xi_pow_d_minus_1_unit_inv);
        for (const auto& c : img.coords)
            if (!is_even(c)) f.residue[j] = 1;
    }
    validate_field(f);
    return f;
}

/// Conjugation z^k -> -z^{d-k} for the cyclotomic power basis with z^d = -1.
inline IntMatrix cyclotomic_conj(int d) {
    IntMatrix m(d, d);
    m(0, 0) = 1;
    for (int k = 1; k < d; ++k) m(d - k, k) = -1;
    return m;
}

}  // namespace detail

inline const FieldSpec& field_spec(std::string_view name) {
    static const FieldSpec qi = detail::make_field("Qi", {1, 0}, detail::cyclotomic_conj(2), RingElem{1, 1}, false);
    static const FieldSpec qsqrt2 =
        detail::make_field("Qsqrt2", {-2, 0}, IntMatrix::identity(2), RingElem{0, 1}, true);
    static const FieldSpec qzeta8 =
        detail::make_field("Qzeta8", {1, 0, 0, 0}, detail::cyclotomic_conj(4), RingElem{1, 1, 0, 0}, false);
    static const FieldSpec qzeta16 = detail::make_field("Qzeta16", {1, 0, 0, 0, 0, 0, 0, 0}, detail::cyclotomic_conj(8),
                                                        RingElem{1, 1, 0, 0, 0, 0, 0, 0}, false);
    static const FieldSpec qcos =
        detail::make_field("Qcos_pi8", {2, 0, -4, 0}, IntMatrix::identity(4), RingElem{2, 1, 0, 0}, true);
    if (name == "Qi") return qi;
    if (name == "Qsqrt2") return qsqrt2;
    if (name == "Qzeta8") return qzeta8;
    if (name == "Qzeta16") return qzeta16;
    if (name == "Qcos_pi8") return qcos;
    fail(ErrorCode::kUnsupported, "unsupported field: " + std::string(name));
}

inline const std::vector<std::string>& field_names() {
    static const std::vector<std::string> names{"Qi", "Qsqrt2", "Qzeta8", "Qzeta16", "Qcos_pi8"};
    return names;
}

inline RingElem ring_zero(const FieldSpec& f) { return RingElem(std::vector<BigInt>(f.degree)); }

inline RingElem ring_int(const FieldSpec& f, const BigInt& n) {
    RingElem x = ring_zero(f);
    x.coords[0] = n;
    return x;
}

inline RingElem ring_one(const FieldSpec& f) { return ring_int(f, 1); }

inline void check_length(const RingElem& x, const FieldSpec& f) {
    require(static_cast<int>(x.size()) == f.degree, ErrorCode::kDimension,
            "ring element has wrong coordinate count for " + f.name);
}

inline RingElem add(const RingElem& x, const RingElem& y) {
    RingElem out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out.coords[i] += y.coords[i];
    return out;
}

inline RingElem sub(const RingElem& x, const RingElem& y) {
    RingElem out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out.coords[i] -= y.coords[i];
    return out;
}

inline RingElem neg(const RingElem& x) {
    RingElem out = x;
    for (auto& c : out.coords) c = -c;
    return out;
}

inline RingElem scale(const RingElem& x, const BigInt& s) {
    RingElem out = x;
    for (auto& c : out.coords) c *= s;
    return out;
}

inline RingElem mul(const RingElem& x, const RingElem& y, const FieldSpec& f) {
    check_length(x, f);
    check_length(y, f);
    return detail::raw_mul(f, x, y);
}

inline RingElem conj(const RingElem& x, const FieldSpec& f) {
    check_length(x, f);
    if (f.totally_real) return x;
    RingElem y = ring_zero(f);
    for (int r = 0; r < f.degree; ++r)
        for (int c = 0; c < f.degree; ++c)
            if (f.conj_matrix(r, c) != 0) y.coords[r] += f.conj_matrix(r, c) * x.coords[c];
    return y;
}

inline RingElem xi_power(const FieldSpec& f, int t) {
    RingElem x = ring_one(f);
    for (int k = 0; k < t; ++k) x = detail::raw_mul(f, x, f.xi);
    return x;
}

inline bool xi_divides(const RingElem& x, const FieldSpec& f) {
    BigInt s = 0;
    for (int j = 0; j < f.degree; ++j)
        if (f.residue[j]) s += x.coords[j];
    return is_even(s);
}

namespace detail {

inline bool all_even(const RingElem& x) {
    for (const auto& c : x.coords)
        if (!is_even(c)) return false;
    return true;
}

/// x / xi, assuming xi divides x.
inline RingElem exact_div_xi(const RingElem& x, const FieldSpec& f) {
    RingElem y = raw_mul(f, x, f.xi_pow_d_minus_1_unit_inv);
    for (auto& c : y.coords) c >>= 1;  // even by assumption; arithmetic shift is exact
    return y;
}

/// x / xi^d = (x/2) * unit_inv, assuming all coordinates even.
inline RingElem exact_div_xi_d(const RingElem& x, const FieldSpec& f) {
    RingElem h = x;
    for (auto& c : h.coords) c >>= 1;
    return raw_mul(f, h, f.unit_inv);
}

}  // namespace detail

inline Valuation xi_valuation(const RingElem& x, const FieldSpec& f) {
    check_length(x, f);
    if (x.is_zero()) return kInfiniteValuation;
    RingElem y = x;
    Valuation v = 0;
    // Strip whole powers of 2 first: v(2) = d.
    int twos = -1;
    for (const auto& c : y.coords)
        if (c != 0) {
            int t = static_cast<int>(boost::multiprecision::lsb(abs(c)));
            if (twos < 0 || t < twos) twos = t;
        }
    if (twos > 0) {
        for (auto& c : y.coords) c >>= twos;
        v += twos * f.degree;
    }
    while (xi_divides(y, f)) {
        y = detail::exact_div_xi(y, f);
        ++v;
    }
    return v;
}

inline RingElem divide_by_xi(const RingElem& x, int t, const FieldSpec& f) {
    check_length(x, f);
    require(t >= 0, ErrorCode::kInvalidArgument, "negative xi exponent");
    RingElem y = x;
    while (t >= f.degree && detail::all_even(y)) {
        y = detail::exact_div_xi_d(y, f);
        t -= f.degree;
    }
    for (; t > 0; --t) {
        if (!xi_divides(y, f)) fail(ErrorCode::kNotDivisible, "element not divisible by the requested power of xi");
        y = detail::exact_div_xi(y, f);
    }
    return y;
}

inline IntMatrix repr_matrix(const RingElem& x, const FieldSpec& f) {
    check_length(x, f);
    const int d = f.degree;
    IntMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        if (x.coords[i] == 0) continue;
        for (int j = 0; j < d; ++j)
            for (const auto& [k, c] : f.terms[i * d + j]) m(k, j) += c * x.coords[i];
    }
    return m;
}

}  // namespace xisynth
