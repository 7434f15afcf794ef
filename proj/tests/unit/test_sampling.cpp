#include "oracles.hpp"

#include <pulsestream/sampling.hpp>

#include <gtest/gtest.h>

using namespace pulsestream;

TEST(GaussianMatrix, Deterministic) {
    const Matrix a = gaussian_matrix(20, 30, 5).dense();
    const Matrix b = gaussian_matrix(20, 30, 5).dense();
    EXPECT_TRUE((a.array() == b.array()).all());
    EXPECT_FALSE((a.array() == gaussian_matrix(20, 30, 6).dense().array()).all());
}

TEST(GaussianMatrix, MeanWithinStandardErrorBand) {
    const Matrix a = gaussian_matrix(200, 50, 9).dense();
    // Entries have sd 1/sqrt(200); the mean of 10^4 of them has sd 1/(100 sqrt(200)).
    const double band = 4.0 / (100.0 * std::sqrt(200.0));
    EXPECT_LE(std::abs(a.mean()), band);
}

TEST(GaussianMatrix, ColumnNormsConcentrate) {
    const Matrix a = gaussian_matrix(200, 50, 10).dense();
    for (Index j = 0; j < a.cols(); ++j) {
        EXPECT_GE(a.col(j).squaredNorm(), 0.5);
        EXPECT_LE(a.col(j).squaredNorm(), 1.5);
    }
}

TEST(GaussianMatrix, VarianceIsOneOverM) {
    const Matrix a = gaussian_matrix(100, 400, 2).dense();
    const double var = a.array().square().mean();
    EXPECT_NEAR(var, 0.01, 0.01 * 0.05);
}

TEST(GaussianMatrix, RejectsEmpty) {
    EXPECT_THROW(gaussian_matrix(0, 3, 1), InvalidArgument);
}

TEST(BernoulliMatrix, EntriesAreSigned) {
    const Matrix a = bernoulli_matrix(16, 8, 1).dense();
    EXPECT_TRUE((a.array().abs() == 0.25).all());
}

TEST(Measure, ZeroIdentityAndLinearity) {
    const auto phi = gaussian_matrix(10, 20, 3);
    EXPECT_EQ(measure(phi, Vector::Zero(20)), Vector::Zero(10));
    const Vector z = oracle::gaussian(20, 1);
    EXPECT_EQ(measure(SamplingMatrix::identity(20), z), z);
    const Vector z2 = oracle::gaussian(20, 2);
    const Vector lhs = measure(phi, 2.5 * z - 0.75 * z2);
    const Vector rhs = 2.5 * measure(phi, z) - 0.75 * measure(phi, z2);
    EXPECT_LE((lhs - rhs).norm(), 1e-12);
    EXPECT_LE((measure(phi, z) - phi.dense() * z).norm(), 1e-13);
    EXPECT_THROW(measure(phi, Vector::Zero(19)), InvalidArgument);
}

TEST(AddNoise, InfiniteSnrIsIdentity) {
    const Vector y = oracle::gaussian(30, 1);
    EXPECT_EQ(add_noise(y, kNoiseless, 4), y);
}

TEST(AddNoise, HitsTargetSnr) {
    const Vector y = oracle::gaussian(150, 2);
    const Vector noisy = add_noise(y, 13.25, 8);
    const Vector n = noisy - y;
    EXPECT_NEAR(10.0 * std::log10(y.squaredNorm() / n.squaredNorm()), 13.25, 1e-9);
    EXPECT_NEAR(snr_db(y, noisy), 13.25, 1e-9);
}

TEST(AddNoise, DeterministicAndRejectsZero) {
    const Vector y = oracle::gaussian(40, 3);
    EXPECT_EQ(add_noise(y, 5.0, 1), add_noise(y, 5.0, 1));
    EXPECT_NE(add_noise(y, 5.0, 1), add_noise(y, 5.0, 2));
    EXPECT_THROW(add_noise(Vector::Zero(5), 10.0, 1), InvalidArgument);
}

TEST(AddNoise, SnrExactnessProperty) {
    for (unsigned s = 0; s < 300; ++s) {
        const Vector y = oracle::gaussian(5 + s % 50, s) * std::pow(10.0, static_cast<double>(s % 7) - 3.0);
        const double target = -20.0 + 0.37 * s;
        const Vector noisy = add_noise(y, target, s);
        const double got = 10.0 * std::log10(y.squaredNorm() / (noisy - y).squaredNorm());
        ASSERT_NEAR(got, target, 1e-9 * std::max(1.0, std::abs(target))) << s;
    }
}

TEST(EmpiricalIsometry, OrthonormalIsExact) {
    const PulseModel m(Domain(64), 3, 4, 8);
    const auto rep = empirical_isometry(orthonormal_matrix(64, 3), m, 50, 1);
    EXPECT_LE(rep.delta_hat, 1e-12);
    EXPECT_EQ(rep.num_pairs, 50);
}

TEST(EmpiricalIsometry, GaussianSquareIsFinite) {
    const PulseModel m(Domain(128), 4, 8, 16);
    const auto rep = empirical_isometry(gaussian_matrix(128, 128, 2), m, 100, 3);
    EXPECT_TRUE(std::isfinite(rep.delta_hat));
    EXPECT_GT(rep.delta_hat, 0.0);
    EXPECT_EQ(rep.num_pairs, 100);
}

TEST(EmpiricalIsometry, ZeroPairs) {
    const PulseModel m(Domain(64), 2, 4, 8);
    const auto rep = empirical_isometry(gaussian_matrix(10, 64, 2), m, 0, 3);
    EXPECT_EQ(rep.delta_hat, 0.0);
    EXPECT_EQ(rep.num_pairs, 0);
}

TEST(EmpiricalIsometry, MatchesDirectComputation) {
    const PulseModel m(Domain(64), 2, 4, 8);
    const auto phi = gaussian_matrix(16, 64, 7);
    const auto rep = empirical_isometry(phi, m, 10, 11);
    double worst = 0.0;
    for (std::uint64_t p = 0; p < 10; ++p) {
        const Vector d = random_instance(m, mix_seed(11, 2 * p)).z - random_instance(m, mix_seed(11, 2 * p + 1)).z;
        worst = std::max(worst, std::abs((phi.dense() * d).squaredNorm() / d.squaredNorm() - 1.0));
    }
    EXPECT_NEAR(rep.delta_hat, worst, 1e-13);
}

TEST(MeasurementBound, FormulaArithmetic) {
    const PulseModel m(Domain(1024), 8, 11, 64);
    // C(519, 7) evaluated in floating point.
    double log_ls = 0.0;
    for (int i = 1; i <= 7; ++i) log_ls += std::log(512.0 + i) - std::log(static_cast<double>(i));
    const double expect = 10.0 * (19.0 * std::log(10.0) + log_ls);
    EXPECT_NEAR(measurement_bound(m, 0.1, 0.0, 1.0), expect, 1e-9 * expect);
}

TEST(MeasurementBound, SmallestModel) {
    const PulseModel m(Domain(16), 1, 1, 16);
    EXPECT_NEAR(measurement_bound(m, 0.5, 0.0, 1.0), 4.0 * std::log(2.0), 1e-14);
}

TEST(MeasurementBound, LinearInT) {
    const PulseModel m(Domain(256), 4, 8, 32);
    const double a = measurement_bound(m, 0.2, 3.0, 1.7);
    const double b = measurement_bound(m, 0.2, 6.0, 1.7);
    EXPECT_NEAR(b - a, 1.7 * 3.0 / 0.2, 1e-10);
}

TEST(MeasurementBound, RejectsBadArguments) {
    const PulseModel m(Domain(256), 4, 8, 32);
    EXPECT_THROW(measurement_bound(m, 0.0, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(measurement_bound(m, 1.0, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(measurement_bound(m, 0.5, -1.0, 1.0), InvalidArgument);
    EXPECT_THROW(measurement_bound(m, 0.5, 0.0, 0.0), InvalidArgument);
}

TEST(MeasurementBound, MonotoneInDeltaFAndT) {
    for (Index delta = 8; delta < 64; ++delta)
        ASSERT_LE(measurement_bound(PulseModel(Domain(256), 4, 8, delta + 1), 0.3, 1.0, 1.0),
                  measurement_bound(PulseModel(Domain(256), 4, 8, delta), 0.3, 1.0, 1.0));
    for (Index f = 1; f < 32; ++f)
        ASSERT_LE(measurement_bound(PulseModel(Domain(256), 4, f, 32), 0.3, 1.0, 1.0),
                  measurement_bound(PulseModel(Domain(256), 4, f + 1, 32), 0.3, 1.0, 1.0));
    for (double t = 0.0; t < 10.0; t += 0.5)
        ASSERT_LE(measurement_bound(PulseModel(Domain(256), 4, 8, 32), 0.3, t, 1.0),
                  measurement_bound(PulseModel(Domain(256), 4, 8, 32), 0.3, t + 0.5, 1.0));
}

TEST(MeasurementBound, MonotoneInSWhileSupportsAbound) {
    // The bound grows with S while the packing is loose (S * Delta <= N / 2).
    const Index n = 1024, delta = 16;
    for (Index s = 1; 2 * (s + 1) * delta <= n; ++s)
        ASSERT_LE(measurement_bound(PulseModel(Domain(n), s, 8, delta), 0.3, 1.0, 1.0),
                  measurement_bound(PulseModel(Domain(n), s + 1, 8, delta), 0.3, 1.0, 1.0))
            << s;
}

TEST(MeasurementBound, TightPackingCanDecreaseInS) {
    // With S * Delta = N there is a single support: L_S = 1 and the log term vanishes.
    const double loose = measurement_bound(PulseModel(Domain(64), 3, 4, 16), 0.3, 0.0, 1.0);
    const double tight = measurement_bound(PulseModel(Domain(64), 4, 4, 16), 0.3, 0.0, 1.0);
    EXPECT_LT(tight, loose);
}
