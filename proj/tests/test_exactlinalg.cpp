#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "xisynth/exact.hpp"
#include "xisynth/gates.hpp"
#include "xisynth/intmatrix.hpp"
#include "xisynth/local_snf.hpp"
#include "xisynth/majorization.hpp"
#include "support.hpp"

using namespace xisynth;

using namespace xisynth::support;

TEST(ExactMatrix, ScalarDenominators) {
    const auto& f = field_spec("Qzeta8");
    RingElem x{3, 1, 0, 2}, y{1, 0, 5, 0};
    OMatrix mx(f, 1, 1), my(f, 1, 1), mxy(f, 1, 1);
    mx.set(0, 0, x);
    my.set(0, 0, y);
    mxy.set(0, 0, mul(x, y, f));
    EXPECT_EQ(matmul(ExactMatrix(mx, 1), ExactMatrix(my, 1)), ExactMatrix(mxy, 2));
}

TEST(ExactMatrix, CanonicalFormReducesDenominator) {
    const auto& f = field_spec("Qi");
    OMatrix m(f, 1, 2);
    m.set(0, 0, RingElem{2, 0});
    m.set(0, 1, RingElem{0, 2});
    ExactMatrix e(m, 3);
    EXPECT_EQ(e.denom_exp(), 1);
    OMatrix z(f, 2, 2);
    EXPECT_EQ(ExactMatrix(z, 5).denom_exp(), 0);
}

TEST(ExactMatrix, IdentityIsNeutral) {
    const auto& f = field_spec("Qzeta8");
    std::mt19937_64 rng(3);
    ExactMatrix a(random_valued_matrix(f, 3, 3, 2, rng), 2);
    EXPECT_EQ(matmul(ExactMatrix::identity(f, 3), a), a);
    EXPECT_EQ(matmul(a, ExactMatrix::identity(f, 3)), a);
}

TEST(ExactMatrix, DaggerProperties) {
    std::mt19937_64 rng(5);
    for (const char* name : {"Qi", "Qzeta8", "Qzeta16", "Qsqrt2"}) {
        const auto& f = field_spec(name);
        EXPECT_EQ(dagger(ExactMatrix::identity(f, 2)), ExactMatrix::identity(f, 2));
        for (int t = 0; t < 10; ++t) {
            ExactMatrix a(random_valued_matrix(f, 2, 3, 2, rng), t % 4);
            EXPECT_EQ(dagger(dagger(a)), a);
            ExactMatrix b(random_valued_matrix(f, 3, 2, 2, rng), (t + 1) % 3);
            EXPECT_EQ(dagger(matmul(a, b)), matmul(dagger(b), dagger(a)));
        }
    }
    const auto& r = field_spec("Qsqrt2");
    ExactMatrix a(random_valued_matrix(r, 2, 3, 1, rng), 1);
    ExactMatrix d = dagger(a);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(d.at(j, i), a.at(i, j));
}

TEST(ExactMatrix, IsIsometry) {
    const auto& f = field_spec("Qzeta8");
    EXPECT_TRUE(is_isometry(ExactMatrix::identity(f, 4)));
    EXPECT_TRUE(is_isometry(standard_gate("T", 1, {0}, f)));
    EXPECT_FALSE(is_isometry(ExactMatrix::from_integers(f, {{1, 1}, {0, 1}})));
}

TEST(Hnf, Examples) {
    EXPECT_EQ(hnf_integer(IntMatrix::identity(3)), IntMatrix::identity(3));
    EXPECT_EQ(hnf_integer(IntMatrix{{2, 0}, {1, 1}}), (IntMatrix{{1, 1}, {0, 2}}));
}

TEST(Hnf, ShapeAndRankDeficiency) {
    IntMatrix h = hnf_integer(IntMatrix{{2, 4, 6}, {1, 2, 3}, {0, 0, 5}});
    EXPECT_EQ(h, (IntMatrix{{1, 2, 3}, {0, 0, 5}, {0, 0, 0}}));
}

TEST(Hnf, CanonicalUnderUnimodularLeftFactors) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + trial % 4;
        IntMatrix a = random_int_matrix(n, n + trial % 2, rng);
        IntMatrix h = hnf_integer(a);
        IntMatrix m = random_int_unimodular(n, rng);
        EXPECT_EQ(hnf_integer(m * a), h);
        EXPECT_EQ(hnf_integer(h), h);
    }
}

TEST(LocalSnf, Examples) {
    const auto& f = field_spec("Qzeta8");
    OMatrix d(f, 2, 2);
    d.set(0, 0, f.xi);
    d.set(1, 1, ring_one(f));
    EXPECT_EQ(xi_local_snf_valuations(d, 4), (std::vector<Valuation>{0, 1}));

    auto basis = basis_matrix(BasisKind::kComplex, 1, f);
    ExactMatrix t = standard_gate("T", 1, {0}, f);
    ExactMatrix conjugated = matmul(matmul(basis.inverse, t), basis.b);
    ASSERT_EQ(conjugated.denom_exp(), 1);
    EXPECT_EQ(xi_local_snf_valuations(conjugated.numerator(), 3), (std::vector<Valuation>{0, 2}));
}

TEST(LocalSnf, OracleExamples) {
    const auto& f = field_spec("Qi");
    OMatrix a(f, 2, 2);
    a.set(0, 0, f.xi);
    a.set(1, 1, f.xi);
    EXPECT_EQ(invariant_factor_oracle_minors(a), (std::vector<Valuation>{1, 1}));
    OMatrix b(f, 2, 2);
    b.set(0, 0, ring_one(f));
    b.set(1, 1, xi_power(f, 2));
    EXPECT_EQ(invariant_factor_oracle_minors(b), (std::vector<Valuation>{0, 2}));
    EXPECT_EQ(xi_local_snf_valuations(b, 5), (std::vector<Valuation>{0, 2}));
}

TEST(LocalSnf, BoundExceeded) {
    const auto& f = field_spec("Qi");
    OMatrix a(f, 2, 2);
    a.set(0, 0, ring_one(f));
    try {
        xi_local_snf_valuations(a, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kBoundExceeded);
    }
}

TEST(LocalSnf, AgreesWithMinorsOracle) {
    std::mt19937_64 rng(29);
    int checked = 0;
    for (const char* name : {"Qi", "Qzeta8"}) {
        const auto& f = field_spec(name);
        for (int trial = 0; trial < 100; ++trial) {
            std::size_t n = 2 + trial % 2;
            OMatrix a = random_valued_matrix(f, n, n, 3, rng);
            auto oracle = invariant_factor_oracle_minors(a);
            if (std::find(oracle.begin(), oracle.end(), kInfiniteValuation) != oracle.end()) continue;
            int total = 0;
            for (auto v : oracle) total += v;
            EXPECT_EQ(xi_local_snf_valuations(a, total), oracle) << name << " trial " << trial;
            ++checked;
        }
    }
    EXPECT_GE(checked, 190);
}

TEST(LocalSnf, InvariantUnderUnimodularFactors) {
    std::mt19937_64 rng(31);
    for (const char* name : {"Qi", "Qzeta8", "Qsqrt2", "Qcos_pi8", "Qzeta16"}) {
        const auto& f = field_spec(name);
        for (int trial = 0; trial < 10; ++trial) {
            OMatrix a = random_valued_matrix(f, 3, 3, 2, rng);
            auto oracle = invariant_factor_oracle_minors(a);
            if (std::find(oracle.begin(), oracle.end(), kInfiniteValuation) != oracle.end()) continue;
            int total = 0;
            for (auto v : oracle) total += v;
            OMatrix b = random_unimodular(f, 3, rng) * a * random_unimodular(f, 3, rng);
            EXPECT_EQ(xi_local_snf_valuations(b, total), oracle) << name;
        }
    }
}

TEST(LocalSnf, ProductDivisibility) {
    std::mt19937_64 rng(37);
    const auto& f = field_spec("Qzeta8");
    for (int trial = 0; trial < 30; ++trial) {
        OMatrix a = random_valued_matrix(f, 3, 3, 2, rng), b = random_valued_matrix(f, 3, 3, 2, rng);
        auto va = invariant_factor_oracle_minors(a), vb = invariant_factor_oracle_minors(b);
        auto has_inf = [](const std::vector<Valuation>& v) {
            return std::find(v.begin(), v.end(), kInfiniteValuation) != v.end();
        };
        if (has_inf(va) || has_inf(vb)) continue;
        int bound = 0;
        for (auto v : va) bound += v;
        for (auto v : vb) bound += v;
        auto sa = xi_local_snf_valuations(a, bound), sb = xi_local_snf_valuations(b, bound);
        auto sab = xi_local_snf_valuations(a * b, bound);
        int pa = 0, pb = 0, pab = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            pa += sa[j];
            pb += sb[j];
            pab += sab[j];
            EXPECT_LE(pa + pb, pab);
        }
    }
}

TEST(Majorization, Examples) {
    EXPECT_TRUE(weakly_majorizes({2, 0}, {1, 1}));
    EXPECT_FALSE(weakly_majorizes({1, 1}, {2, 0}));
    EXPECT_TRUE(weakly_majorizes({3, 1}, {3, 1}));
    EXPECT_TRUE(strictly_weakly_majorizes({2, 0}, {1, 1}));
    EXPECT_FALSE(strictly_weakly_majorizes({3, 1}, {3, 1}));
    EXPECT_TRUE(strictly_weakly_majorizes({1, 0}, {0, 0}));
    try {
        weakly_majorizes({1}, {1, 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kDimension);
    }
}

TEST(Majorization, PrefixSumProposition) {
    std::mt19937_64 rng(41);
    auto random_sorted = [&](std::size_t n) {
        std::uniform_int_distribution<int> dist(0, 6);
        IntVector v(n);
        for (auto& x : v) x = dist(rng);
        std::sort(v.begin(), v.end(), std::greater<>());
        return v;
    };
    int tested = 0;
    for (int trial = 0; tested < 1000 && trial < 200000; ++trial) {
        std::size_t n = 1 + trial % 4;
        IntVector u = random_sorted(n), v = random_sorted(n), x = random_sorted(n), y = random_sorted(n);
        if (!strictly_weakly_majorizes(v, u)) continue;
        IntVector shifted(n);
        for (std::size_t k = 0; k < n; ++k) shifted[k] = y[k] + u[k] - v[k];
        if (!weakly_majorizes(shifted, x)) continue;
        EXPECT_TRUE(strictly_weakly_majorizes(y, x));
        ++tested;
    }
    EXPECT_EQ(tested, 1000);
}
