#include "oracles.hpp"

#include <pulsestream/signal_model.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace pulsestream;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

std::vector<std::vector<Index>> as_lists(const std::vector<Support>& s) {
    std::vector<std::vector<Index>> out;
    for (const auto& x : s) out.push_back(x.indices());
    return out;
}

}  // namespace

TEST(CircularConvolve, UnitImpulseIsIdentity) {
    const Domain d(8);
    Vector x = Vector::Zero(8);
    x[0] = 1.0;
    const Vector h = oracle::gaussian(8, 1);
    EXPECT_EQ(circular_convolve(x, h, d), h);
}

TEST(CircularConvolve, HandExample) {
    EXPECT_EQ(circular_convolve(vec({1, 0, 0, 2, 0, 0}), vec({1, 1, 0, 0, 0, 0}), Domain(6)), vec({1, 1, 0, 2, 2, 0}));
}

TEST(CircularConvolve, Wraparound) {
    EXPECT_EQ(circular_convolve(vec({0, 0, 0, 0, 0, 1}), vec({1, 2, 0, 0, 0, 0}), Domain(6)), vec({2, 0, 0, 0, 0, 1}));
}

TEST(CircularConvolve, RejectsDomainMismatch) {
    EXPECT_THROW(circular_convolve(Vector::Ones(5), Vector::Ones(6), Domain(6)), InvalidArgument);
}

TEST(CircularConvolve, MatchesQuadraticOracle1D) {
    for (unsigned s = 0; s < 20; ++s) {
        Vector x = oracle::gaussian(23, s);
        for (Index i = 0; i < 23; ++i)
            if (i % 4 != 0) x[i] = 0.0;
        const Vector h = oracle::gaussian(23, 100 + s);
        EXPECT_LE((circular_convolve(x, h, Domain(23)) - oracle::convolve(x, h)).norm(), 1e-12 * (1 + h.norm()));
    }
}

TEST(CircularConvolve, MatchesQuadraticOracle2D) {
    for (unsigned s = 0; s < 10; ++s) {
        const Vector x = oracle::gaussian(5 * 7, s);
        const Vector h = oracle::gaussian(5 * 7, 50 + s);
        EXPECT_LE((circular_convolve(x, h, Domain(5, 7)) - oracle::convolve(x, h, 5, 7)).norm(), 1e-11);
    }
}

TEST(CircularConvolve, CommutativityIsBitExact) {
    for (unsigned s = 0; s < 200; ++s) {
        const Index n = 8 + s % 40;
        Vector x = oracle::gaussian(n, s);
        Vector h = oracle::gaussian(n, 1000 + s);
        for (Index i = 0; i < n; ++i) {
            if ((i + s) % 3) x[i] = 0.0;
            if (i >= 5) h[i] = 0.0;
        }
        const Domain d(n);
        const Vector a = circular_convolve(x, h, d);
        const Vector b = circular_convolve(h, x, d);
        ASSERT_TRUE((a.array() == b.array()).all()) << "seed " << s;
    }
    for (unsigned s = 0; s < 50; ++s) {
        const Domain d(6, 9);
        const Vector x = oracle::gaussian(54, s);
        const Vector h = oracle::gaussian(54, 77 + s);
        const Vector a = circular_convolve(x, h, d);
        const Vector b = circular_convolve(h, x, d);
        ASSERT_TRUE((a.array() == b.array()).all()) << "2D seed " << s;
    }
}

TEST(CircularConvolve, EqualNonzeroCountsStillCommute) {
    // Same support size on both sides exercises the value-based tie break.
    const Domain d(12);
    Vector x = Vector::Zero(12), h = Vector::Zero(12);
    x[1] = 0.1;
    x[5] = 0.7;
    x[9] = 1e-3;
    h[0] = 0.3;
    h[1] = 0.9;
    h[2] = 1.7;
    const Vector a = circular_convolve(x, h, d);
    const Vector b = circular_convolve(h, x, d);
    EXPECT_TRUE((a.array() == b.array()).all());
}

TEST(IsInModel, Examples) {
    const PulseModel m(Domain(10), 2, 1, 5);
    EXPECT_TRUE(is_in_model(Support({0, 5}, Domain(10)), m));
    EXPECT_FALSE(is_in_model(Support({0, 9}, Domain(10)), m));
    EXPECT_TRUE(is_in_model(Support({3}, Domain(10)), m));
    EXPECT_FALSE(is_in_model(Support({0, 5, 7}, Domain(20)), PulseModel(Domain(20), 2, 1, 2)));
}

TEST(IsInModel, TwoDimensionalHypercubes) {
    const Domain d(8, 8);
    const PulseModel m(d, 3, 4, 3);
    EXPECT_TRUE(is_in_model(Support({d.linear({0, 0}), d.linear({0, 3})}, d), m));
    EXPECT_FALSE(is_in_model(Support({d.linear({0, 0}), d.linear({2, 2})}, d), m));
    EXPECT_FALSE(is_in_model(Support({d.linear({0, 0}), d.linear({7, 6})}, d), m));  // wraps on both axes
}

TEST(CountSupports, FormulaExamples) {
    EXPECT_EQ(count_supports(10, 2, 3), 5);
    EXPECT_EQ(count_supports(10, 1, 10), 1);
    EXPECT_EQ(count_supports(12, 3, 4), 1);
    EXPECT_EQ(count_supports(10, 3, 4), 0);
}

TEST(CountSupports, MatchesIndependentBinomial) {
    for (long n = 1; n <= 40; ++n)
        for (long s = 1; s <= 4; ++s)
            for (long delta = 1; s * delta <= n; ++delta)
                ASSERT_EQ(count_supports(n, s, delta), oracle::binomial(n - s * delta + s - 1, s - 1));
}

TEST(CountSupports, BigValuesAreExact) {
    // C(1024 - 8*64 + 7, 7) = C(519, 7)
    const BigInt v = count_supports(1024, 8, 64);
    BigInt expect = 1;
    for (int i = 1; i <= 7; ++i) expect = expect * (519 - 7 + i) / i;
    EXPECT_EQ(v, expect);
    EXPECT_NEAR(log_bigint(v), std::log(expect.convert_to<double>()), 1e-9);
    EXPECT_NEAR(log_bigint(binomial(400, 200)), std::lgamma(401.0) - 2 * std::lgamma(201.0), 1e-6);
}

TEST(EnumerateSupports, Examples) {
    EXPECT_EQ(as_lists(enumerate_supports(5, 2, 2)),
              (std::vector<std::vector<Index>>{{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}}));
    EXPECT_EQ(as_lists(enumerate_supports(4, 1, 1)), (std::vector<std::vector<Index>>{{0}, {1}, {2}, {3}}));
    EXPECT_EQ(as_lists(enumerate_supports(6, 3, 2)), (std::vector<std::vector<Index>>{{0, 2, 4}, {1, 3, 5}}));
    EXPECT_TRUE(enumerate_supports(6, 3, 3).empty());
}

TEST(EnumerateSupports, MatchesBitmaskOracleAndMembership) {
    for (long n = 1; n <= 16; ++n)
        for (long s = 1; s <= 3; ++s)
            for (long delta = 1; s * delta <= n; ++delta) {
                const auto got = enumerate_supports(n, s, delta);
                std::vector<std::vector<long>> lists;
                for (const auto& g : got) {
                    ASSERT_TRUE(is_in_model(g, PulseModel(Domain(n), s, 1, delta)));
                    lists.emplace_back(g.indices().begin(), g.indices().end());
                }
                ASSERT_EQ(lists, oracle::admissible_sets(n, s, delta)) << n << ' ' << s << ' ' << delta;
            }
}

TEST(EnumerateSupports, CountConsistency) {
    // The enumeration is the circular count; the closed-form count differs by the factor N / S.
    int differs = 0;
    for (long n = 1; n <= 16; ++n)
        for (long s = 1; s <= 3; ++s)
            for (long delta = 1; s * delta <= n; ++delta) {
                const auto size = static_cast<long>(enumerate_supports(n, s, delta).size());
                ASSERT_EQ(BigInt(size), count_circular_supports(n, s, delta));
                ASSERT_EQ(BigInt(size) * s, count_supports(n, s, delta) * n);
                differs += BigInt(size) != count_supports(n, s, delta);
            }
    EXPECT_GT(differs, 0);
}

TEST(RandomInstance, ValidAndNormalized) {
    const PulseModel m(Domain(1024), 8, 11, 64);
    const auto inst = random_instance(m, 1);
    EXPECT_TRUE(is_in_model(inst.x.support(), m));
    EXPECT_EQ(inst.x.support().size(), 8);
    EXPECT_NEAR(inst.h.norm(), 1.0, 1e-14);
    EXPECT_EQ(inst.h.length(), 11);
    EXPECT_TRUE(inst.uniform_support);
    EXPECT_EQ(inst.z, circular_convolve(inst.x.dense(), inst.h.dense(), m.domain));
}

TEST(RandomInstance, Deterministic) {
    const PulseModel m(Domain(1024), 8, 11, 64);
    const auto a = random_instance(m, 99);
    const auto b = random_instance(m, 99);
    EXPECT_EQ(a.x.support(), b.x.support());
    EXPECT_TRUE((a.z.array() == b.z.array()).all());
    EXPECT_NE(random_instance(m, 100).x.support(), a.x.support());
}

TEST(RandomInstance, SparsityBound) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const PulseModel m(Domain(1024), 8, 11, 64);
        const auto inst = random_instance(m, s);
        ASSERT_LE((inst.z.array() != 0.0).count(), 88);
    }
    const PulseModel m2(Domain(32, 32), 4, 9, 8);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto inst = random_instance(m2, s);
        ASSERT_TRUE(is_in_model(inst.x.support(), m2));
        ASSERT_LE((inst.z.array() != 0.0).count(), 36);
    }
}

TEST(RandomInstance, TightPackingUsesFlaggedFallback) {
    // S * Delta = N leaves only Delta admissible supports out of C(N, S) draws.
    const PulseModel m(Domain(200), 20, 3, 10);
    EXPECT_THROW(random_instance(m, Distribution{}, Distribution{}, 5, false), InvalidArgument);
    const auto inst = random_instance(m, 5);
    EXPECT_FALSE(inst.uniform_support);
    EXPECT_TRUE(is_in_model(inst.x.support(), m));
    EXPECT_EQ(inst.x.support().size(), 20);
}

TEST(RandomInstance, SupportIsRoughlyUniform) {
    // Admissible supports for N=12, S=2, Delta=4: each should appear ~ equally often.
    const PulseModel m(Domain(12), 2, 1, 4);
    const auto all = enumerate_supports(12, 2, 4);
    std::map<std::vector<Index>, int> hits;
    const int draws = 6000;
    for (int s = 0; s < draws; ++s) ++hits[random_instance(m, static_cast<std::uint64_t>(s)).x.support().indices()];
    EXPECT_EQ(hits.size(), all.size());
    const double expect = static_cast<double>(draws) / static_cast<double>(all.size());
    for (const auto& [k, v] : hits) EXPECT_NEAR(v, expect, 6.0 * std::sqrt(expect));
}

TEST(RandomInstance, AmplitudeDistributions) {
    const PulseModel m(Domain(64), 4, 3, 8);
    const auto r = random_instance(m, {Distribution::Kind::Rademacher, 2.0}, {}, 4);
    for (Index i = 0; i < r.x.values().size(); ++i) EXPECT_EQ(std::abs(r.x.values()[i]), 2.0);
    const auto u = random_instance(m, {Distribution::Kind::Uniform, 0.5}, {}, 4);
    for (Index i = 0; i < u.x.values().size(); ++i) EXPECT_LE(std::abs(u.x.values()[i]), 0.5);
}
