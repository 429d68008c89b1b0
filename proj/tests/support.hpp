#pragma once

#include <random>

#include "xisynth/exact.hpp"
#include "xisynth/intmatrix.hpp"
#include "xisynth/normalize.hpp"

namespace xisynth::support {

inline RingElem random_elem(const FieldSpec& f, std::mt19937_64& rng, int bound = 4) {
    std::uniform_int_distribution<int> dist(-bound, bound);
    RingElem x = ring_zero(f);
    for (auto& c : x.coords) c = dist(rng);
    return x;
}

/// Random matrix whose entries are random elements times xi^v, v in [0, vmax].
inline OMatrix random_valued_matrix(const FieldSpec& f, std::size_t r, std::size_t c, int vmax,
                                    std::mt19937_64& rng) {
    std::uniform_int_distribution<int> vd(0, vmax);
    OMatrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, mul(random_elem(f, rng), xi_power(f, vd(rng)), f));
    return m;
}

/// Random O_E-unimodular matrix from elementary row operations.
inline OMatrix random_unimodular(const FieldSpec& f, std::size_t n, std::mt19937_64& rng) {
    OMatrix u = OMatrix::identity(f, n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    for (int step = 0; step < 6; ++step) {
        std::size_t a = idx(rng), b = idx(rng);
        if (a == b) continue;
        OMatrix e = OMatrix::identity(f, n);
        e.set(a, b, random_elem(f, rng, 2));
        u = e * u;
    }
    return u;
}

inline IntMatrix random_int_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, int bound = 6) {
    std::uniform_int_distribution<int> dist(-bound, bound);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

inline IntMatrix random_int_unimodular(std::size_t n, std::mt19937_64& rng) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> k(-3, 3);
    for (int step = 0; step < 12; ++step) {
        std::size_t a = idx(rng), b = idx(rng);
        if (a == b) {
            u.swap_rows(a, (a + 1) % n);
            continue;
        }
        u.add_row_multiple(a, b, k(rng));
    }
    return u;
}

/// Product of k generators drawn uniformly from a normalized gate set.
inline ExactMatrix random_product(const GateSet& gs, std::mt19937_64& rng, int k) {
    ExactMatrix u = ExactMatrix::identity(*gs.field, std::size_t{1} << gs.n);
    for (int j = 0; j < k; ++j) u = u * gs.generators[rng() % gs.generators.size()].matrix;
    return u;
}

/// Random word of length len in the cost-zero generators on n qubits.
inline ExactMatrix random_cost_zero(CostZeroKind kind, int n, const FieldSpec& f, std::mt19937_64& rng,
                                    int len = 16) {
    static thread_local std::vector<LabeledMatrix> gens;
    static thread_local std::tuple<CostZeroKind, int, const FieldSpec*> cached{};
    if (gens.empty() || cached != std::tuple{kind, n, &f}) {
        gens = cost_zero_generators(kind, n, f);
        cached = {kind, n, &f};
    }
    ExactMatrix c = ExactMatrix::identity(f, std::size_t{1} << n);
    for (int j = 0; j < len; ++j) c = c * gens[rng() % gens.size()].matrix;
    return c;
}

}  // namespace xisynth::support
