#pragma once

#include "core.hpp"
#include "measurement.hpp"
#include "rng.hpp"
#include "signal_model.hpp"

#include <cstdint>
#include <limits>

namespace pulsestream {

/// i.i.d. N(0, 1/M) entries, drawn in row-major order from Rng(seed).
inline SamplingMatrix gaussian_matrix(Index m, Index n, std::uint64_t seed) {
    require(m >= 1 && n >= 1, "sampling matrix needs M, N >= 1");
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Matrix a(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = scale * rng.normal();
    return SamplingMatrix(std::move(a), seed);
}

/// i.i.d. +-1/sqrt(M) entries. Same interface as gaussian_matrix.
inline SamplingMatrix bernoulli_matrix(Index m, Index n, std::uint64_t seed) {
    require(m >= 1 && n >= 1, "sampling matrix needs M, N >= 1");
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Matrix a(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = scale * rng.sign();
    return SamplingMatrix(std::move(a), seed);
}

/// Random N x N orthogonal matrix (Q factor of a Gaussian matrix). An exact isometry.
inline SamplingMatrix orthonormal_matrix(Index n, std::uint64_t seed) {
    const Matrix g = gaussian_matrix(n, n, seed).dense();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    return SamplingMatrix(std::move(q), seed);
}

inline Vector measure(const SamplingMatrix& phi, const Vector& z) { return phi.apply(z); }

constexpr double kNoiseless = std::numeric_limits<double>::infinity();

/**
 * y + n with n Gaussian, rescaled so that 10 log10(||y||^2 / ||n||^2) equals
 * snr_db exactly. snr_db = +inf returns y unchanged.
 */
inline Vector add_noise(const Vector& y, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0) return y;
    require(std::isfinite(snr_db), "SNR must be finite or +inf");
    const double energy = y.norm();
    require(energy > 0.0, "cannot set a finite SNR on a zero signal");
    Rng rng(seed);
    Vector n(y.size());
    for (Index i = 0; i < y.size(); ++i) n[i] = rng.normal();
    const double target = energy / std::pow(10.0, snr_db / 20.0);
    n *= target / n.norm();
    return y + n;
}

inline double snr_db(const Vector& clean, const Vector& noisy) {
    return 10.0 * std::log10(clean.squaredNorm() / (noisy - clean).squaredNorm());
}

struct IsometryReport {
    double delta_hat = 0.0;
    Index num_pairs = 0;
    PulseModel model;
};

/**
 * Largest observed |‖Phi(z1 - z2)‖² / ‖z1 - z2‖² - 1| over random model
 * pairs. A sampled lower bound on the true embedding constant.
 */
inline IsometryReport empirical_isometry(const SamplingMatrix& phi, const PulseModel& model, Index num_pairs,
                                         std::uint64_t seed) {
    require(phi.cols() == model.domain.size(), "sampling matrix width must equal the model's N");
    IsometryReport rep{0.0, 0, model};
    for (Index p = 0; p < num_pairs; ++p) {
        const auto a = random_instance(model, mix_seed(seed, static_cast<std::uint64_t>(2 * p)));
        const auto b = random_instance(model, mix_seed(seed, static_cast<std::uint64_t>(2 * p + 1)));
        const Vector d = a.z - b.z;
        const double den = d.squaredNorm();
        if (den == 0.0) continue;
        const double ratio = phi.apply(d).squaredNorm() / den;
        rep.delta_hat = std::max(rep.delta_hat, std::abs(ratio - 1.0));
        ++rep.num_pairs;
    }
    return rep;
}

/**
 * Indicative measurement count c/δ · ((S+F) ln(1/δ) + ln(L_S · L_F) + t) for
 * the disjoint model, with L_S = count_supports(N, S, Δ) and L_F = 1.
 */
inline double measurement_bound(const PulseModel& model, double delta, double t, double c) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(t >= 0.0, "t must be >= 0");
    require(c > 0.0, "c must be > 0");
    const BigInt ls = count_supports(model.domain.size(), model.spikes, model.separation);
    require(ls > 0, "infeasible model");
    const double dof = static_cast<double>(model.spikes + model.pulse_length);
    return c / delta * (dof * std::log(1.0 / delta) + log_bigint(ls) + t);
}

}  // namespace pulsestream
