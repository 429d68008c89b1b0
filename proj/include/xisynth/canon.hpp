#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xisynth/bigint.hpp"
#include "xisynth/error.hpp"
#include "xisynth/exact.hpp"
#include "xisynth/gates.hpp"
#include "xisynth/intmatrix.hpp"
#include "xisynth/local_snf.hpp"
#include "xisynth/majorization.hpp"
#include "xisynth/modular.hpp"

namespace xisynth {

/// Output and input basis-change matrices together with their inverses.
struct BasisChange {
    BasisKind kind = BasisKind::kComplex;
    int n_out = 0;
    int n_in = 0;
    ExactMatrix out, out_inv, in, in_inv;
};

inline BasisChange make_basis_change(BasisKind kind, int n_out, int n_in, const FieldSpec& f) {
    require(0 <= n_in && n_in <= n_out, ErrorCode::kDimension, "need 0 <= n_in <= n_out");
    auto bo = basis_matrix(kind, n_out, f);
    auto bi = basis_matrix(kind, n_in, f);
    return {kind, n_out, n_in, std::move(bo.b), std::move(bo.inverse), std::move(bi.b), std::move(bi.inverse)};
}

/// Integral form xi^nu B_out^-1 U B_in of an isometry.
struct Tilde {
    int nu = 0;
    OMatrix m;
};

inline Tilde tilde_of(const ExactMatrix& u, const BasisChange& b) {
    require(u.rows() == b.out.rows() && u.cols() == b.in.rows(), ErrorCode::kDimension,
            "matrix shape does not match the basis change");
    ExactMatrix w = matmul(matmul(b.out_inv, u), b.in);
    return {w.denom_exp(), w.numerator()};
}

inline int nu(const ExactMatrix& u, const BasisChange& b) { return tilde_of(u, b).nu; }

enum class CoordsKind { kUnitary, kIsometry };

struct Coords {
    IntVector values;  // non-increasing
    CoordsKind kind = CoordsKind::kUnitary;
    std::size_t lanes = 0;  // N of the ambient 2N-dimensional unitary

    friend bool operator==(const Coords& a, const Coords& b) { return a.values == b.values && a.kind == b.kind; }
};

struct VertexKey {
    std::string bytes;
    int nu = 0;

    friend bool operator==(const VertexKey& a, const VertexKey& b) { return a.bytes == b.bytes; }
    friend bool operator!=(const VertexKey& a, const VertexKey& b) { return a.bytes != b.bytes; }
    friend bool operator<(const VertexKey& a, const VertexKey& b) { return a.bytes < b.bytes; }
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const noexcept { return std::hash<std::string>{}(k.bytes); }
};

namespace detail {

inline void append_header(std::string& out, std::size_t rows, std::size_t cols, int nu) {
    append_twos_complement(out, BigInt(rows));
    append_twos_complement(out, BigInt(cols));
    append_twos_complement(out, BigInt(nu));
}

/// Entry ((j,a),(k,b)) of Z(A^t): coordinate a of A_{kj} * b_b.
template <class Arith, class T>
std::vector<typename Arith::Word> z_transpose_mod(const CoeffView<T>& a, const Arith& ar) {
    using Word = typename Arith::Word;
    const FieldSpec& f = *a.field;
    const int d = f.degree;
    const std::size_t rows = a.cols * d, cols = a.rows * d;
    std::vector<Word> z(rows * cols, Word(0));
    for (std::size_t k = 0; k < a.rows; ++k)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const T* x = a.data + (k * a.cols + j) * d;
            for (int i = 0; i < d; ++i) {
                if (x[i] == 0) continue;
                Word xi = ar.from_value(x[i]);
                for (int b = 0; b < d; ++b)
                    for (const auto& [row, c] : f.terms[i * d + b]) {
                        Word& dst = z[(j * d + row) * cols + k * d + b];
                        dst = ar.add(dst, ar.mul(ar.from_int(c), xi));
                    }
            }
        }
    return z;
}

template <class Word>
Word odd_inverse(const Word& x, int bits, const std::function<Word(const Word&)>& reduce) {
    Word y = x;  // correct to 3 bits for odd x
    for (int precision = 3; precision < bits; precision *= 2) y = reduce(y * reduce(Word(2) - reduce(x * y)));
    return y;
}

/// Row HNF of an n x n integer lattice that contains 2^m Z^n, computed modulo 2^m.
/// Appends, for each row, its pivot column and the entries from the pivot onward.
template <class Arith>
void modular_hnf_bytes(std::vector<typename Arith::Word> z, std::size_t n, int m, std::string& out,
                       std::int64_t* log2_det) {
    using Word = typename Arith::Word;
    const Arith ar(m);
    auto reduce = [&](const Word& w) { return ar.reduce(w); };
    // rows 0..n-1 hold the generators, n..2n-1 the saturation rows, 2n stays zero
    std::vector<Word> pool = std::move(z);
    pool.resize((2 * n + 1) * n, Word(0));
    auto row = [&](std::size_t id) { return pool.data() + id * n; };
    std::vector<std::size_t> active;
    active.reserve(n);
    for (std::size_t r = 0; r < n; ++r) active.push_back(r);
    std::size_t next_free = n;
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pivot_row(n, kNone);
    std::vector<int> pivot_exp(n, m);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = kNone;
        int best_v = m;
        for (std::size_t i = 0; i < active.size(); ++i) {
            int v = ar.twos(row(active[i])[c]);
            if (v < best_v) {
                best_v = v;
                best = i;
                if (v == 0) break;
            }
        }
        if (best == kNone) continue;  // pivot 2^m
        const std::size_t pid = active[best];
        active[best] = active.back();
        active.pop_back();
        Word* p = row(pid);
        Word odd = Arith::shr(p[c], best_v);
        if (!(odd == Word(1))) {
            Word inv = odd_inverse<Word>(odd, m, reduce);
            for (std::size_t k = c; k < n; ++k) p[k] = ar.mul(p[k], inv);
        }
        for (std::size_t id : active) {
            Word* r = row(id);
            if (Arith::is_zero(r[c])) continue;
            Word q = Arith::shr(r[c], best_v);
            for (std::size_t k = c; k < n; ++k)
                if (!Arith::is_zero(p[k])) r[k] = ar.sub(r[k], ar.mul(q, p[k]));
        }
        if (best_v > 0) {
            Word* sat = row(next_free);
            Word s = ar.pow2(m - best_v);
            bool nonzero = false;
            for (std::size_t k = c + 1; k < n; ++k) {
                sat[k] = ar.mul(s, p[k]);
                nonzero = nonzero || !Arith::is_zero(sat[k]);
            }
            if (nonzero) active.push_back(next_free);
            ++next_free;
        }
        pivot_exp[c] = best_v;
        pivot_row[c] = pid;
    }
    // a missing pivot stands for the row 2^m e_c, whose entries past the pivot vanish
    for (std::size_t c = 0; c < n; ++c)
        if (pivot_row[c] == kNone) pivot_row[c] = 2 * n;
    // Reduce entries above each pivot into [0, pivot).
    for (std::size_t c = 0; c < n; ++c) {
        if (pivot_exp[c] >= m) continue;  // entries already lie in [0, 2^m)
        const Word* pc = row(pivot_row[c]);
        for (std::size_t i = 0; i < c; ++i) {
            Word* ri = row(pivot_row[i]);
            Word q = Arith::shr(ri[c], pivot_exp[c]);
            if (Arith::is_zero(q)) continue;
            for (std::size_t k = c; k < n; ++k)
                if (!Arith::is_zero(pc[k])) ri[k] = ar.sub(ri[k], ar.mul(q, pc[k]));
        }
    }
    std::int64_t total = 0;
    for (std::size_t c = 0; c < n; ++c) {
        total += pivot_exp[c];
        const Word* rc = row(pivot_row[c]);
        append_twos_complement(out, BigInt(c));
        if (pivot_exp[c] >= m) {
            append_twos_complement(out, BigInt(1) << m);
        } else {
            ar.append_bytes(out, rc[c]);
        }
        for (std::size_t k = c + 1; k < n; ++k) ar.append_bytes(out, rc[k]);
    }
    if (log2_det) *log2_det = total;
}

inline void integer_hnf_bytes(const IntMatrix& h, std::string& out) {
    for (std::size_t r = 0; r < h.rows(); ++r) {
        std::size_t c = 0;
        while (c < h.cols() && h(r, c) == 0) ++c;
        if (c == h.cols()) break;
        append_twos_complement(out, BigInt(c));
        for (std::size_t k = c; k < h.cols(); ++k) append_twos_complement(out, h(r, k));
    }
}

inline IntMatrix z_of_transpose(const OMatrix& a) {
    OMatrix t(a.field(), a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t.set(c, r, a.at(r, c));
    return z_of_matrix(t);
}

}  // namespace detail

/// Vertex data computed together: the key and the coordinates share the SNF.
struct VertexInfo {
    VertexKey key;
    Coords coords;
};

/// xi-adic SNF valuations of a unitary's integral form, checked for the
/// symmetric pattern s_j + s_{2N+1-j} = 2 nu.
template <class T>
std::vector<Valuation> unitary_snf(const detail::CoeffView<T>& m, int nu) {
    auto s = xi_local_snf_valuations(m, 2 * nu + 1);
    const std::size_t n = s.size();
    for (std::size_t j = 0; j < n; ++j)
        if (s[j] + s[n - 1 - j] != 2 * nu)
            fail(ErrorCode::kInvariant, "invariant factors are not symmetric around nu; input is not unitary");
    return s;
}

inline std::vector<Valuation> unitary_snf(const Tilde& t) { return unitary_snf(detail::view(t.m), t.nu); }

template <class T>
std::vector<Valuation> isometry_snf(const detail::CoeffView<T>& m, int nu) {
    for (int vmax = nu + 1;; vmax = 2 * vmax + 1) {
        try {
            return xi_local_snf_valuations(m, vmax);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::kBoundExceeded || vmax > 4096) throw;
        }
    }
}

inline std::vector<Valuation> isometry_snf(const Tilde& t) { return isometry_snf(detail::view(t.m), t.nu); }

inline Coords coords_from_valuations(const std::vector<Valuation>& s, int nu, std::size_t rows, std::size_t cols) {
    const bool square = rows == cols;
    const std::size_t n_half = rows / 2;
    const std::size_t len = square ? n_half : std::min(n_half, cols);
    Coords c;
    c.kind = square ? CoordsKind::kUnitary : CoordsKind::kIsometry;
    c.lanes = std::max<std::size_t>(n_half, 1);
    for (std::size_t j = 0; j < len && j < s.size(); ++j) c.values.push_back(nu - s[j]);
    return c;
}

/// Key and coordinates of the vertex with integral form m and exponent nu.
/// The isometry key goes through the exact HNF, so it needs the matrix itself.
template <class T>
VertexInfo analyze_coeffs(const detail::CoeffView<T>& m, int nu, const std::function<OMatrix()>& as_matrix) {
    const FieldSpec& f = *m.field;
    const bool square = m.rows == m.cols;
    VertexInfo info;
    info.key.nu = nu;
    detail::append_header(info.key.bytes, m.rows, m.cols, nu);
    if (square) {
        auto s = unitary_snf(m, nu);
        info.coords = coords_from_valuations(s, nu, m.rows, m.cols);
        const int smax = s.empty() ? 0 : s.back();
        const int bits = std::max(1, (smax + f.degree - 1) / f.degree);
        const std::size_t n = m.rows * f.degree;
        std::int64_t log2det = 0;
        if (WordArith::fits(bits))
            detail::modular_hnf_bytes<WordArith>(detail::z_transpose_mod(m, WordArith(bits)), n, bits,
                                                 info.key.bytes, &log2det);
        else
            detail::modular_hnf_bytes<BigArith>(detail::z_transpose_mod(m, BigArith(bits)), n, bits,
                                                info.key.bytes, &log2det);
        std::int64_t expected = 0;
        for (auto v : s) expected += v;
        if (log2det != expected) fail(ErrorCode::kInvariant, "vertex key determinant does not match the SNF");
    } else {
        auto s = isometry_snf(m, nu);
        info.coords = coords_from_valuations(s, nu, m.rows, m.cols);
        detail::integer_hnf_bytes(hnf_integer(detail::z_of_transpose(as_matrix())), info.key.bytes);
    }
    return info;
}

inline VertexInfo analyze_tilde(const Tilde& t) {
    return analyze_coeffs(detail::view(t.m), t.nu, [&] { return t.m; });
}

inline VertexInfo analyze(const ExactMatrix& u, const BasisChange& b) { return analyze_tilde(tilde_of(u, b)); }

inline VertexKey vertex_key(const ExactMatrix& u, const BasisChange& b) { return analyze(u, b).key; }

/// Key computed by the generic exact integer HNF; slow reference path.
inline VertexKey vertex_key_reference(const ExactMatrix& u, const BasisChange& b) {
    Tilde t = tilde_of(u, b);
    VertexKey k;
    k.nu = t.nu;
    detail::append_header(k.bytes, t.m.rows(), t.m.cols(), t.nu);
    detail::integer_hnf_bytes(hnf_integer(detail::z_of_transpose(t.m)), k.bytes);
    return k;
}

inline Coords coords_unitary(const ExactMatrix& u, const BasisChange& b) {
    require(u.rows() == u.cols(), ErrorCode::kDimension, "coords_unitary needs a square matrix");
    Tilde t = tilde_of(u, b);
    return coords_from_valuations(unitary_snf(t), t.nu, u.rows(), u.cols());
}

inline Coords coords_isometry(const ExactMatrix& u, const BasisChange& b) {
    Tilde t = tilde_of(u, b);
    return coords_from_valuations(isometry_snf(t), t.nu, u.rows(), u.cols());
}

/// scale * max(0, sum_j 2^(32 (N - j)) nu_j) for j = 1..len, so the largest
/// coordinate occupies the most significant lane. Isometry coordinates may be
/// negative; the sum is still a non-negative combination of prefix sums.
inline BigInt heuristic_value(const Coords& c, std::int64_t scale = 1) {
    require(scale > 0, ErrorCode::kInvalidArgument, "heuristic scale must be positive");
    BigInt h = 0;
    const std::size_t lanes = std::max(c.lanes, c.values.size());
    for (std::size_t j = 0; j < c.values.size(); ++j) {
        const std::int64_t v = c.values[j];
        require(v > -(std::int64_t{1} << 32) && v < (std::int64_t{1} << 32), ErrorCode::kBoundExceeded,
                "coordinate " + std::to_string(v) + " does not fit a 32-bit lane");
        if (v >= 0)
            h += BigInt(v) << (32 * (lanes - 1 - j));
        else
            h -= BigInt(-v) << (32 * (lanes - 1 - j));
    }
    if (h < 0) h = 0;
    return h * scale;
}

/// Thread-safe memo of coordinates by vertex key.
class CoordsCache {
  public:
    Coords get_or_compute(const VertexKey& key, const std::function<Coords()>& compute) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        Coords c = compute();
        std::lock_guard<std::mutex> lock(mu_);
        return map_.emplace(key, std::move(c)).first->second;
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return map_.size();
    }

  private:
    mutable std::mutex mu_;
    std::unordered_map<VertexKey, Coords, VertexKeyHash> map_;
};

}  // namespace xisynth
