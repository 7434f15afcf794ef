#pragma once

#include "core.hpp"
#include "signal_model.hpp"
#include "simplex.hpp"

namespace pulsestream {

/// Best approximation in the separated spike model: maximize sum_{i in s} c_i.
struct ApproxProblem {
    Vector energies;  // c_i = x_i^2
    Index spikes = 0;
    Index separation = 1;
    bool circular = true;

    Index size() const { return energies.size(); }

    void validate() const {
        require(energies.size() >= 1, "empty energy vector");
        require((energies.array() >= 0.0).all() && energies.allFinite(), "energies must be finite and nonnegative");
        require(spikes >= 0, "S must be >= 0");
        require(separation >= 1, "Delta must be >= 1");
        require(spikes * separation <= size(), "infeasible packing: S * Delta > N");
        require(circular, "only the circular constraint set is supported");
    }
};

enum class ApproxMethod { Dp, Lp, Brute, Greedy };

struct ApproxSolution {
    Support support;
    double objective = 0.0;
    ApproxMethod method = ApproxMethod::Dp;
    bool integral = true;       // LP only: false if some entry stayed fractional
    double lp_objective = 0.0;  // LP only: relaxed optimum before rounding
};

/// Objective summed over the sorted support, so equal supports give equal doubles.
inline double support_energy(const Vector& c, const Support& s) {
    double acc = 0.0;
    for (Index i : s.indices()) acc += c[i];
    return acc;
}

/// Every window of Delta cyclically consecutive indices holds at most one pick, and |s| <= S.
inline bool satisfies_window_constraints(const Support& s, Index spikes, Index separation) {
    if (s.size() > spikes) return false;
    return circularly_separated(s.indices(), s.domain().size(), separation);
}

namespace detail {

struct ChainResult {
    double value = 0.0;
    std::vector<Index> picks;
};

// Linear-chain DP over positions [lo, hi] of c: at most k picks, consecutive
// picks >= delta apart. Returns the lexicographically smallest optimum.
inline ChainResult chain_dp(const Vector& c, Index lo, Index hi, Index k, Index delta) {
    ChainResult out;
    const Index len = hi - lo + 1;
    if (len <= 0 || k <= 0) return out;
    const Index rows = len + delta + 1;
    // best(i, j): best value from positions >= lo + i with at most j picks.
    Matrix best = Matrix::Zero(rows, k + 1);
    for (Index i = len - 1; i >= 0; --i)
        for (Index j = 1; j <= k; ++j) best(i, j) = std::max(best(i + 1, j), c[lo + i] + best(i + delta, j - 1));

    out.value = best(0, k);
    Index i = 0;
    Index j = k;
    while (j > 0 && i < len && best(i, j) != 0.0) {
        if (c[lo + i] + best(i + delta, j - 1) == best(i, j)) {
            out.picks.push_back(lo + i);
            i += delta;
            --j;
        } else {
            ++i;
        }
    }
    return out;
}

inline bool better(double obj_a, const Support& a, double obj_b, const Support& b) {
    if (obj_a != obj_b) return obj_a > obj_b;
    return a < b;
}

}  // namespace detail

/**
 * Exact circular solver. Either no pick falls in [0, Delta), in which case the
 * picks live in [Delta, N) and the wraparound gap is automatic, or exactly one
 * pick f < Delta does and the rest live in [f + Delta, f + N - Delta]. Each of
 * the Delta + 1 cases is a linear-chain DP. O(Delta * N * S).
 */
inline ApproxSolution best_approx_dp(const ApproxProblem& p) {
    p.validate();
    const Index n = p.size();
    const Domain d(n);
    const Vector& c = p.energies;

    ApproxSolution best{Support({}, d), 0.0, ApproxMethod::Dp};
    if (p.spikes == 0) return best;

    {
        auto r = detail::chain_dp(c, p.separation, n - 1, p.spikes, p.separation);
        Support s(r.picks, d);
        best.support = s;
        best.objective = support_energy(c, s);
    }
    for (Index f = 0; f < std::min(p.separation, n); ++f) {
        auto r = detail::chain_dp(c, f + p.separation, f + n - p.separation, p.spikes - 1, p.separation);
        r.picks.insert(r.picks.begin(), f);
        Support s(r.picks, d);
        const double obj = support_energy(c, s);
        if (detail::better(obj, s, best.objective, best.support)) {
            best.support = std::move(s);
            best.objective = obj;
        }
    }
    return best;
}

/// Exhaustive oracle over every admissible support of size 0..S. N <= 24.
inline ApproxSolution best_approx_brute(const ApproxProblem& p) {
    p.validate();
    require(p.size() <= 24, "brute-force approximation is limited to N <= 24");
    const Index n = p.size();
    const Domain d(n);
    ApproxSolution best{Support({}, d), 0.0, ApproxMethod::Brute};
    for (Index s = 1; s <= p.spikes; ++s) {
        SupportEnumerator it(n, s, p.separation);
        while (auto sup = it.next()) {
            const double obj = support_energy(p.energies, *sup);
            if (detail::better(obj, *sup, best.objective, best.support)) {
                best.support = std::move(*sup);
                best.objective = obj;
            }
        }
    }
    return best;
}

constexpr double kIntegralityTol = 1e-6;

/// The (N+1) x N constraint matrix: a row of ones, then one row per circular window of Delta.
inline Matrix window_constraint_matrix(Index n, Index separation) {
    Matrix w = Matrix::Zero(n + 1, n);
    w.row(0).setOnes();
    for (Index j = 0; j < n; ++j)
        for (Index t = 0; t < separation; ++t) w(j + 1, (j + t) % n) = 1.0;
    return w;
}

/**
 * LP relaxation: maximize c^T s subject to W s <= (S, 1, ..., 1), 0 <= s <= 1.
 * Entries within eps_int of 1 are selected; anything left strictly between
 * eps_int and 1 - eps_int marks the solution non-integral instead of being
 * rounded silently.
 */
inline ApproxSolution best_approx_lp(const ApproxProblem& p, double eps_int = kIntegralityTol) {
    p.validate();
    const Index n = p.size();
    const Domain d(n);
    const Matrix w = window_constraint_matrix(n, p.separation);

    Matrix a(2 * n + 1, n);
    a.topRows(n + 1) = w;
    a.bottomRows(n) = Matrix::Identity(n, n);
    Vector b = Vector::Ones(2 * n + 1);
    b[0] = static_cast<double>(p.spikes);

    const LpResult lp = simplex_maximize(a, b, p.energies);
    require(lp.status == LpStatus::Optimal, "LP relaxation did not reach optimality");

    ApproxSolution sol{Support({}, d), 0.0, ApproxMethod::Lp};
    sol.lp_objective = lp.objective;
    std::vector<Index> picks;
    for (Index i = 0; i < n; ++i) {
        if (lp.x[i] >= 1.0 - eps_int)
            picks.push_back(i);
        else if (lp.x[i] > eps_int)
            sol.integral = false;
    }
    sol.support = Support(picks, d);
    sol.objective = support_energy(p.energies, sol.support);
    return sol;
}

/**
 * Greedy selector for arbitrary domains: take indices by decreasing energy
 * (ties to the lower index), skipping zero energy and anything that shares a
 * Delta-hypercube with an earlier pick. Exact only in easy cases; used for 2D.
 */
inline Support greedy_separated_support(const Vector& c, const Domain& d, Index spikes, Index separation) {
    std::vector<Index> order(static_cast<std::size_t>(c.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return c[a] > c[b]; });
    std::vector<Index> picks;
    for (Index k : order) {
        if (static_cast<Index>(picks.size()) >= spikes || c[k] <= 0.0) break;
        bool ok = true;
        for (Index q : picks) ok = ok && d.separated(q, k, separation);
        if (ok) picks.push_back(k);
    }
    return Support(picks, d);
}

/// Support of the best model approximation of x: exact DP in 1D, greedy in 2D.
inline Support model_support(const Vector& x, const Domain& d, Index spikes, Index separation) {
    require(x.size() == d.size(), "vector does not span the domain");
    const Vector c = x.array().square();
    if (d.dims() == 1) {
        ApproxProblem p{c, spikes, separation, true};
        return best_approx_dp(p).support;
    }
    return greedy_separated_support(c, d, spikes, separation);
}

/// Keeps x on its best model support; the l2-closest point of the model to x.
inline SpikeStream prune_to_model(const Vector& x, const Domain& d, Index spikes, Index separation) {
    return SpikeStream::restrict(x, model_support(x, d, spikes, separation));
}

inline SpikeStream prune_to_model(const Vector& x, Index spikes, Index separation) {
    return prune_to_model(x, Domain(x.size()), spikes, separation);
}

}  // namespace pulsestream
