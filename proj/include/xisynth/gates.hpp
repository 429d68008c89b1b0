#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "xisynth/error.hpp"
#include "xisynth/exact.hpp"
#include "xisynth/numberfield.hpp"

namespace xisynth {

enum class BasisKind { kComplex, kReal };

namespace constants {

inline ExactScalar from_coords(const FieldSpec& f, std::vector<long long> c, int k = 0) {
    RingElem x(std::vector<BigInt>(c.begin(), c.end()));
    return make_scalar(f, x, k);
}

[[noreturn]] inline void missing(std::string_view what, const FieldSpec& f) {
    fail(ErrorCode::kFieldMismatch, std::string(what) + " is not available in " + f.name);
}

inline ExactScalar integer(const FieldSpec& f, long long n) { return make_scalar(f, ring_int(f, n)); }

inline ExactScalar half(const FieldSpec& f) { return scalar_inverse(integer(f, 2), f); }

inline ExactScalar imag_unit(const FieldSpec& f) {
    if (f.name == "Qi") return from_coords(f, {0, 1});
    if (f.name == "Qzeta8") return from_coords(f, {0, 0, 1, 0});
    if (f.name == "Qzeta16") return from_coords(f, {0, 0, 0, 0, 1, 0, 0, 0});
    missing("i", f);
}

inline ExactScalar zeta8(const FieldSpec& f) {
    if (f.name == "Qzeta8") return from_coords(f, {0, 1, 0, 0});
    if (f.name == "Qzeta16") return from_coords(f, {0, 0, 1, 0, 0, 0, 0, 0});
    missing("zeta8", f);
}

inline ExactScalar zeta16(const FieldSpec& f) {
    if (f.name == "Qzeta16") return from_coords(f, {0, 1, 0, 0, 0, 0, 0, 0});
    missing("zeta16", f);
}

inline ExactScalar sqrt2(const FieldSpec& f) {
    if (f.name == "Qsqrt2") return from_coords(f, {0, 1});
    if (f.name == "Qzeta8") return from_coords(f, {0, 1, 0, -1});
    if (f.name == "Qzeta16") return from_coords(f, {0, 0, 1, 0, 0, 0, -1, 0});
    if (f.name == "Qcos_pi8") return from_coords(f, {-2, 0, 1, 0});
    missing("sqrt(2)", f);
}

inline ExactScalar inv_sqrt2(const FieldSpec& f) { return scalar_inverse(sqrt2(f), f); }

inline ExactScalar inv_one_plus_i(const FieldSpec& f) {
    return scalar_inverse(scalar_add(integer(f, 1), imag_unit(f), f), f);
}

inline ExactScalar cos_pi8(const FieldSpec& f) {
    if (f.name == "Qcos_pi8") return scalar_mul(from_coords(f, {0, 1, 0, 0}), half(f), f);
    if (f.name == "Qzeta16") return scalar_mul(from_coords(f, {0, 1, 0, 0, 0, 0, 0, -1}), half(f), f);
    missing("cos(pi/8)", f);
}

inline ExactScalar sin_pi8(const FieldSpec& f) {
    if (f.name == "Qcos_pi8") return scalar_mul(from_coords(f, {0, -3, 0, 1}), half(f), f);
    if (f.name == "Qzeta16") return scalar_mul(from_coords(f, {0, 0, 0, 1, 0, -1, 0, 0}), half(f), f);
    missing("sin(pi/8)", f);
}

}  // namespace constants

namespace detail {

inline ExactMatrix matrix2(const FieldSpec& f, const ExactScalar& a, const ExactScalar& b, const ExactScalar& c,
                           const ExactScalar& d) {
    return ExactMatrix::from_scalars(f, 2, 2, {a, b, c, d});
}

inline ExactMatrix diag2(const FieldSpec& f, const ExactScalar& phase) {
    return matrix2(f, constants::integer(f, 1), constants::integer(f, 0), constants::integer(f, 0), phase);
}

inline ExactMatrix rotation(const FieldSpec& f, const ExactScalar& c, const ExactScalar& s) {
    return matrix2(f, c, scalar_neg(s), s, c);
}

/// |0><0| (x) I + |1><1| (x) U
inline ExactMatrix controlled(const ExactMatrix& u) {
    const FieldSpec& f = u.field();
    const std::size_t m = u.rows();
    std::vector<ExactScalar> entries;
    entries.reserve(4 * m * m);
    for (std::size_t r = 0; r < 2 * m; ++r)
        for (std::size_t c = 0; c < 2 * m; ++c) {
            if (r < m && c < m)
                entries.push_back(constants::integer(f, r == c ? 1 : 0));
            else if (r >= m && c >= m)
                entries.push_back(u.at(r - m, c - m));
            else
                entries.push_back(constants::integer(f, 0));
        }
    return ExactMatrix::from_scalars(f, 2 * m, 2 * m, entries);
}

inline ExactMatrix local_gate(std::string_view name, const FieldSpec& f, int& arity) {
    using namespace constants;
    auto one = [&] { return integer(f, 1); };
    auto zero = [&] { return integer(f, 0); };
    auto pauli_x = [&] { return matrix2(f, zero(), one(), one(), zero()); };
    auto pauli_z = [&] { return diag2(f, integer(f, -1)); };
    auto s_gate = [&] { return diag2(f, imag_unit(f)); };
    auto hadamard = [&] {
        auto r = inv_sqrt2(f);
        return matrix2(f, r, r, r, scalar_neg(r));
    };
    auto sy = [&] {
        auto r = inv_sqrt2(f);
        return rotation(f, r, r);
    };
    auto ty = [&] { return rotation(f, cos_pi8(f), sin_pi8(f)); };
    arity = 1;
    if (name == "X") return pauli_x();
    if (name == "Z") return pauli_z();
    if (name == "S") return s_gate();
    if (name == "T") return diag2(f, zeta8(f));
    if (name == "sqrtT") return diag2(f, zeta16(f));
    if (name == "H") return hadamard();
    if (name == "Htilde") {
        auto r = inv_one_plus_i(f);
        return matrix2(f, r, r, r, scalar_neg(r));
    }
    if (name == "Sy") return sy();
    if (name == "Ty") return ty();
    arity = 2;
    if (name == "CX") return controlled(pauli_x());
    if (name == "CZ") return controlled(pauli_z());
    if (name == "CS") return controlled(s_gate());
    if (name == "CH") return controlled(hadamard());
    if (name == "CT") return controlled(diag2(f, zeta8(f)));
    if (name == "CSy") return controlled(sy());
    if (name == "CTy") return controlled(ty());
    if (name == "SWAP") {
        std::vector<ExactScalar> e(16, zero());
        e[0] = e[6] = e[9] = e[15] = one();
        return ExactMatrix::from_scalars(f, 4, 4, e);
    }
    arity = 3;
    if (name == "CCZ") return controlled(controlled(pauli_z()));
    if (name == "CCS") return controlled(controlled(s_gate()));
    if (name == "CCSy") return controlled(controlled(sy()));
    fail(ErrorCode::kUnsupported, "unknown gate: " + std::string(name));
}

}  // namespace detail

inline const std::vector<std::string>& standard_gate_names() {
    static const std::vector<std::string> names{"X",  "Z",  "S",   "T",   "sqrtT", "H",   "Htilde",
                                                "Sy", "Ty", "CX",  "CZ",  "CS",    "CH",  "CT",
                                                "CSy", "CTy", "CCZ", "CCS", "CCSy", "SWAP"};
    return names;
}

/// Places a k-qubit matrix on the given qubits of an n-qubit register
/// (qubit 0 is the most significant tensor factor).
inline ExactMatrix embed(const ExactMatrix& g, int n, const std::vector<int>& targets) {
    const FieldSpec& f = g.field();
    const int k = static_cast<int>(targets.size());
    require(g.rows() == (std::size_t{1} << k) && g.cols() == g.rows(), ErrorCode::kDimension,
            "gate size does not match target count");
    std::vector<bool> used(n, false);
    for (int t : targets) {
        require(t >= 0 && t < n, ErrorCode::kInvalidArgument, "target qubit out of range");
        require(!used[t], ErrorCode::kInvalidArgument, "repeated target qubit");
        used[t] = true;
    }
    const std::size_t dim = std::size_t{1} << n;
    std::size_t target_mask = 0;
    for (int t : targets) target_mask |= std::size_t{1} << (n - 1 - t);
    auto sub = [&](std::size_t x) {
        std::size_t s = 0;
        for (int t : targets) s = (s << 1) | ((x >> (n - 1 - t)) & 1);
        return s;
    };
    OMatrix num(f, dim, dim);
    const OMatrix& gn = g.numerator();
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~target_mask) != (c & ~target_mask)) continue;
            const BigInt* src = gn.entry(sub(r), sub(c));
            std::copy(src, src + f.degree, num.entry(r, c));
        }
    return ExactMatrix(std::move(num), g.denom_exp());
}

inline ExactMatrix standard_gate(std::string_view name, int n, const std::vector<int>& targets, const FieldSpec& f) {
    int arity = 0;
    ExactMatrix g = detail::local_gate(name, f, arity);
    require(static_cast<int>(targets.size()) == arity, ErrorCode::kInvalidArgument,
            std::string(name) + " acts on " + std::to_string(arity) + " qubit(s)");
    return embed(g, n, targets);
}

inline int standard_gate_arity(std::string_view name) {
    static const std::vector<std::string> two{"CX", "CZ", "CS", "CH", "CT", "CSy", "CTy", "SWAP"};
    static const std::vector<std::string> three{"CCZ", "CCS", "CCSy"};
    for (const auto& s : two)
        if (s == name) return 2;
    for (const auto& s : three)
        if (s == name) return 3;
    for (const auto& s : standard_gate_names())
        if (s == name) return 1;
    fail(ErrorCode::kUnsupported, "unknown gate: " + std::string(name));
}

struct BasisPair {
    ExactMatrix b;
    ExactMatrix inverse;
};

inline BasisPair basis_matrix(BasisKind kind, int n, const FieldSpec& f) {
    require(n >= 0, ErrorCode::kInvalidArgument, "negative qubit count");
    ExactScalar root = kind == BasisKind::kComplex
                           ? scalar_add(constants::integer(f, 1), constants::imag_unit(f), f)
                           : constants::sqrt2(f);
    ExactScalar inv = scalar_inverse(root, f);
    auto one = constants::integer(f, 1), zero = constants::integer(f, 0);
    ExactMatrix b1 = detail::matrix2(f, inv, zero, inv, one);
    ExactMatrix b1inv = detail::matrix2(f, root, zero, constants::integer(f, -1), one);
    ExactMatrix b = ExactMatrix::identity(f, 1), binv = ExactMatrix::identity(f, 1);
    for (int k = 0; k < n; ++k) {
        b = kron(b, b1);
        binv = kron(binv, b1inv);
    }
    return {std::move(b), std::move(binv)};
}

/// First 2^n_in columns of a 2^n_out square matrix.
inline ExactMatrix pad_isometry(const ExactMatrix& u, int n_in, int n_out) {
    require(n_in >= 0 && n_in <= n_out, ErrorCode::kDimension, "pad_isometry: need 0 <= n_in <= n_out");
    require(u.rows() == (std::size_t{1} << n_out) && u.cols() == u.rows(), ErrorCode::kDimension,
            "pad_isometry: matrix is not 2^n_out square");
    return u.columns(0, std::size_t{1} << n_in);
}

/// Matrix sending |j> to |sigma(j)>.
inline ExactMatrix permutation_unitary(const std::vector<std::size_t>& sigma, const FieldSpec& f) {
    const std::size_t n = sigma.size();
    std::vector<bool> hit(n, false);
    for (auto s : sigma) {
        require(s < n && !hit[s], ErrorCode::kInvalidArgument, "permutation is not a bijection");
        hit[s] = true;
    }
    OMatrix num(f, n, n);
    for (std::size_t j = 0; j < n; ++j) num.coord(sigma[j], j, 0) = 1;
    return ExactMatrix(std::move(num), 0);
}

/// The 4x2 isometry [aI + ibX + icY + idZ ; I] / (1+i)^k with a^2+b^2+c^2+d^2 = 2^k - 1.
/// Dividing by (1+i)^k instead of sqrt(2)^k changes only a global phase.
inline ExactMatrix v_isometry(long long a, long long b, long long c, long long d, const FieldSpec& f) {
    const long long s = a * a + b * b + c * c + d * d;
    int k = 0;
    while ((1LL << k) - 1 < s && k < 62) ++k;
    require(k >= 1 && (1LL << k) - 1 == s, ErrorCode::kInvalidArgument,
            "a^2+b^2+c^2+d^2 must equal 2^k - 1 for some k >= 1");
    using namespace constants;
    const ExactScalar i = imag_unit(f);
    auto lin = [&](long long re, long long im) {
        return scalar_add(integer(f, re), scalar_mul(integer(f, im), i, f), f);
    };
    std::vector<ExactScalar> e{lin(a, d),       lin(c, b),       lin(-c, b),      lin(a, -d),
                               integer(f, 1),   integer(f, 0),   integer(f, 0),   integer(f, 1)};
    ExactMatrix m = ExactMatrix::from_scalars(f, 4, 2, e);
    ExactScalar denom = scalar_add(integer(f, 1), i, f);
    ExactScalar p = integer(f, 1);
    for (int t = 0; t < k; ++t) p = scalar_mul(p, denom, f);
    return scalar_times(scalar_inverse(p, f), m);
}

/// |+>^n, using the phase-adjusted Hadamard when sqrt(2) is missing.
inline ExactMatrix plus_state(int n, const FieldSpec& f) {
    ExactMatrix h = [&] {
        try {
            return standard_gate("H", 1, {0}, f);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::kFieldMismatch) throw;
            return standard_gate("Htilde", 1, {0}, f);
        }
    }();
    ExactMatrix state = ExactMatrix::identity(f, 1);
    for (int k = 0; k < n; ++k) state = kron(state, h.columns(0, 1));
    return state;
}

}  // namespace xisynth
