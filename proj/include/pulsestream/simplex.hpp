#pragma once

#include "core.hpp"

namespace pulsestream {

enum class LpStatus { Optimal, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    Vector x;
    double objective = 0.0;
    Index pivots = 0;
};

/**
 * Dense tableau simplex for
 *
 *     maximize c^T x  subject to  A x <= b,  x >= 0,   with b >= 0.
 *
 * b >= 0 makes the slack basis feasible, so no phase one is needed.
 * Bland's rule picks both the entering and the leaving variable, which
 * rules out cycling on the heavily degenerate packing LPs used here.
 */
inline LpResult simplex_maximize(const Matrix& a, const Vector& b, const Vector& c, double eps = 1e-12,
                                 Index max_pivots = 1'000'000) {
    const Index m = a.rows();
    const Index n = a.cols();
    require(b.size() == m && c.size() == n, "simplex: dimension mismatch");
    require((b.array() >= 0.0).all(), "simplex: right-hand side must be nonnegative");

    // Columns [0, n) structural, [n, n + m) slack, last column rhs. Row m is -c.
    Matrix t = Matrix::Zero(m + 1, n + m + 1);
    t.topLeftCorner(m, n) = a;
    t.block(0, n, m, m).setIdentity();
    t.topRightCorner(m, 1) = b;
    t.bottomLeftCorner(1, n) = -c.transpose();

    std::vector<Index> basis(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

    LpResult res;
    const Index rhs = n + m;
    for (;;) {
        Index enter = -1;
        for (Index j = 0; j < n + m; ++j) {
            if (t(m, j) < -eps) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;

        Index leave = -1;
        double best = 0.0;
        for (Index i = 0; i < m; ++i) {
            if (t(i, enter) <= eps) continue;
            const double ratio = t(i, rhs) / t(i, enter);
            const auto ui = static_cast<std::size_t>(i);
            if (leave < 0 || ratio < best - eps ||
                (ratio <= best + eps && basis[ui] < basis[static_cast<std::size_t>(leave)])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        if (res.pivots >= max_pivots) {
            res.status = LpStatus::IterationLimit;
            break;
        }

        t.row(leave) /= t(leave, enter);
        for (Index i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t(i, enter);
            if (f != 0.0) t.row(i) -= f * t.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
        ++res.pivots;
    }

    res.x = Vector::Zero(n);
    for (Index i = 0; i < m; ++i) {
        const Index v = basis[static_cast<std::size_t>(i)];
        if (v < n) res.x[v] = t(i, rhs);
    }
    res.objective = c.dot(res.x);
    return res;
}

}  // namespace pulsestream
