#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the library's algorithms; only plain Eigen types are shared.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// z[k] = sum_j x[j] h[k - j] with per-axis wraparound, O(N^2), row-major 1D or 2D.
inline Vec convolve(const Vec& x, const Vec& h, long rows, long cols) {
    const long n = rows * cols;
    Vec z = Vec::Zero(n);
    for (long k = 0; k < n; ++k) {
        const long kr = k / cols, kc = k % cols;
        double acc = 0.0;
        for (long j = 0; j < n; ++j) {
            const long jr = j / cols, jc = j % cols;
            const long dr = ((kr - jr) % rows + rows) % rows;
            const long dc = ((kc - jc) % cols + cols) % cols;
            acc += x[j] * h[dr * cols + dc];
        }
        z[k] = acc;
    }
    return z;
}

inline Vec convolve(const Vec& x, const Vec& h) { return convolve(x, h, 1, x.size()); }

/// Dense N x N circulant whose column j is g shifted by j (1D).
inline Mat circulant(const Vec& g) {
    const long n = g.size();
    Mat c(n, n);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) c(i, j) = g[((i - j) % n + n) % n];
    return c;
}

/// (A^T A)^{-1} A^T y.
inline Vec normal_equations(const Mat& a, const Vec& y) {
    const Mat g = a.transpose() * a;
    return g.inverse() * (a.transpose() * y);
}

inline std::uint64_t binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (long i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// Every window of `delta` cyclically consecutive positions holds at most one pick.
inline bool windows_ok(const std::vector<int>& picks01, long delta) {
    const long n = static_cast<long>(picks01.size());
    for (long j = 0; j < n; ++j) {
        int cnt = 0;
        for (long t = 0; t < delta; ++t) cnt += picks01[static_cast<std::size_t>((j + t) % n)];
        if (cnt > 1) return false;
    }
    return true;
}

inline std::vector<int> mask_to_01(std::uint32_t mask, long n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
    return v;
}

/// Sorted index lists of exactly s picks satisfying the window constraints (bitmask sweep).
inline std::vector<std::vector<long>> admissible_sets(long n, long s, long delta) {
    std::vector<std::vector<long>> out;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (__builtin_popcount(mask) != s) continue;
        if (!windows_ok(mask_to_01(mask, n), delta)) continue;
        std::vector<long> idx;
        for (long i = 0; i < n; ++i)
            if ((mask >> i) & 1U) idx.push_back(i);
        out.push_back(idx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// max c^T s over binary s with |s| <= S and the window constraints.
inline double best_energy(const Vec& c, long s, long delta) {
    const long n = c.size();
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (__builtin_popcount(mask) > s) continue;
        if (!windows_ok(mask_to_01(mask, n), delta)) continue;
        double e = 0.0;
        for (long i = 0; i < n; ++i)
            if ((mask >> i) & 1U) e += c[i];
        best = std::max(best, e);
    }
    return best;
}

/// Plain std::mt19937 Gaussian vector for test inputs.
inline Vec gaussian(long n, unsigned seed) {
    std::mt19937 g(seed);
    std::normal_distribution<double> d;
    Vec v(n);
    for (long i = 0; i < n; ++i) v[i] = d(g);
    return v;
}

}  // namespace oracle
