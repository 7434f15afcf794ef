#pragma once

#include "core.hpp"
#include "linop.hpp"
#include "measurement.hpp"
#include "model_approx.hpp"
#include "rng.hpp"
#include "signal_model.hpp"

#include <limits>
#include <optional>

namespace pulsestream {

enum class Halting { ResidualBelowEps, RelativeChange, MaxIters };

struct RecoveryConfig {
    Index max_outer_iters = 50;
    Index max_inner_iters = 20;
    double residual_tol = 0.0;  // epsilon, absolute ||y - Phi z||
    Halting halting = Halting::RelativeChange;
    double rel_change_tol = 1e-6;
    double rank_tol = kDefaultRankTol;
    // Iterative support estimation only: start 0 uses the flat pulse, start r > 0 a
    // random unit pulse drawn from mix_seed(restart_seed, r). The lowest residual wins.
    Index restarts = 1;
    std::uint64_t restart_seed = 0;

    void validate() const {
        require(max_outer_iters >= 1 && max_inner_iters >= 1, "iteration caps must be >= 1");
        require(restarts >= 1, "restarts must be >= 1");
        require(residual_tol >= 0.0, "epsilon must be >= 0");
        require(rel_change_tol >= 0.0, "relative change tolerance must be >= 0");
    }
};

enum class RecoveryStatus { Converged, MaxIters, IntegralityFlag };

struct RecoveryResult {
    Vector z_hat;
    SpikeStream x_hat;
    ImpulseResponse h_hat;
    std::vector<double> residual_history;
    Index iterations = 0;
    RecoveryStatus status = RecoveryStatus::MaxIters;
    bool rank_deficient = false;
    Index start = 0;  // which restart produced this result

    double residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// ||z - z_hat||^2 / ||z||^2.
inline double normalized_mse(const Vector& z, const Vector& z_hat) {
    const double den = z.squaredNorm();
    require(den > 0.0, "normalized MSE of a zero reference");
    return (z - z_hat).squaredNorm() / den;
}

namespace detail {

inline Matrix spike_dictionary(const ImpulseResponse& h, const std::vector<Index>& columns, const SamplingMatrix& phi) {
    return ColumnRestriction(CirculantOperator(h.dense(), h.domain()), columns, phi).materialize();
}

inline Matrix pulse_dictionary(const SpikeStream& x, const std::vector<Index>& footprint, const SamplingMatrix& phi) {
    return ColumnRestriction(CirculantOperator(x.dense(), x.domain()), footprint, phi).materialize();
}

// Unit-norm pulse with a positive first nonzero; the scale moves into x.
inline bool normalize_pair(SpikeStream& x, ImpulseResponse& h) {
    const double n = h.norm();
    if (n == 0.0 || !std::isfinite(n)) return false;
    double sign = 1.0;
    for (Index i = 0; i < h.length(); ++i) {
        if (h.coefficients()[i] != 0.0) {
            sign = h.coefficients()[i] > 0.0 ? 1.0 : -1.0;
            break;
        }
    }
    h = ImpulseResponse(h.coefficients() * (sign / n), h.domain());
    x = x.scaled(sign * n);
    return true;
}

inline bool all_zero(const Vector& v) { return v.size() == 0 || (v.array() == 0.0).all(); }

inline RecoveryResult assemble(SpikeStream x, ImpulseResponse h) {
    RecoveryResult r;
    r.z_hat = convolve(x, h);
    r.x_hat = std::move(x);
    r.h_hat = std::move(h);
    return r;
}

}  // namespace detail

/// Output of one alternating-minimization run on a fixed spike support.
struct InnerResult {
    SpikeStream x;
    ImpulseResponse h;
    double residual = 0.0;
    std::vector<double> history;
    Index iterations = 0;
    bool rank_deficient = false;
    bool converged = false;
};

/**
 * Alternating least squares on a fixed support sigma: solve for the spike
 * amplitudes with the pulse fixed, then for the pulse with the spikes
 * fixed, renormalize. An update that raises the residual by more than
 * 1e-12 (relative) is rejected and ends the loop as converged, so the
 * recorded history is nonincreasing. Stops on a residual below a finite epsilon, a relative
 * decrease below rel_change_tol, or max_inner_iters.
 */
inline InnerResult am_inner(const Vector& y, const SamplingMatrix& phi, const Support& sigma,
                            const ImpulseResponse& h_init, const RecoveryConfig& cfg) {
    cfg.validate();
    const Domain& d = h_init.domain();
    require(sigma.domain() == d, "support and pulse domains differ");
    require(phi.cols() == d.size() && y.size() == phi.rows(), "measurement dimensions do not match");
    const auto footprint = h_init.footprint();

    InnerResult out;
    out.x = SpikeStream(sigma, Vector::Zero(sigma.size()));
    out.h = h_init;
    double prev = y.norm();
    out.residual = prev;
    if (prev == 0.0) {
        out.converged = true;
        return out;
    }

    for (Index it = 0; it < cfg.max_inner_iters; ++it) {
        const auto lsx = least_squares(detail::spike_dictionary(out.h, sigma.indices(), phi), y, cfg.rank_tol);
        if (detail::all_zero(lsx.coefficients)) break;
        SpikeStream x(sigma, lsx.coefficients);
        const auto lsh = least_squares(detail::pulse_dictionary(x, footprint, phi), y, cfg.rank_tol);
        ImpulseResponse h(lsh.coefficients, d);
        if (!detail::normalize_pair(x, h)) break;

        const double r = (y - phi.apply(convolve(x, h))).norm();
        if (!(r <= prev * (1.0 + 1e-12))) {
            out.converged = true;
            break;
        }

        out.x = std::move(x);
        out.h = std::move(h);
        out.rank_deficient = out.rank_deficient || lsx.rank_deficient || lsh.rank_deficient;
        out.history.push_back(r);
        out.residual = r;
        out.iterations = it + 1;

        const bool below_eps = std::isfinite(cfg.residual_tol) && r < cfg.residual_tol;
        if (r == 0.0 || below_eps) {
            out.converged = true;
            break;
        }
        if (cfg.halting == Halting::RelativeChange && prev - r <= cfg.rel_change_tol * prev) {
            out.converged = true;
            break;
        }
        prev = r;
    }
    return out;
}

constexpr double kDefaultSupportCap = 1e6;

/**
 * Exhaustive alternating minimization: runs am_inner from the flat pulse
 * 1_F / sqrt(F) on every admissible support in lexicographic order and
 * returns the first one whose residual drops below epsilon, or else the
 * lowest-residual candidate. `iterations` counts the supports examined.
 */
inline RecoveryResult am_exhaustive(const Vector& y, const SamplingMatrix& phi, const PulseModel& model,
                                    const RecoveryConfig& cfg, double support_cap = kDefaultSupportCap) {
    model.validate();
    cfg.validate();
    require(model.domain.dims() == 1, "exhaustive search is implemented for 1D domains");
    const Index n = model.domain.size();
    const BigInt count = count_circular_supports(n, model.spikes, model.separation);
    if (count > BigInt(static_cast<long long>(support_cap)))
        throw InvalidArgument("too many candidate supports for exhaustive search (" + count.str() +
                              "); use iterative support estimation instead");

    const ImpulseResponse h0 = ImpulseResponse::flat(model.pulse_length, model.domain);
    std::optional<InnerResult> best;
    Index examined = 0;
    bool hit = false;
    SupportEnumerator it(n, model.spikes, model.separation);
    while (auto sigma = it.next()) {
        ++examined;
        InnerResult cand = am_inner(y, phi, *sigma, h0, cfg);
        const bool accept = cand.residual < cfg.residual_tol || cand.residual == 0.0;
        if (accept || !best || cand.residual < best->residual) best = std::move(cand);
        if (accept) {
            hit = true;
            break;
        }
    }

    RecoveryResult res = detail::assemble(best->x, best->h);
    res.residual_history = best->history;
    if (res.residual_history.empty()) res.residual_history.push_back(best->residual);
    res.iterations = examined;
    res.rank_deficient = best->rank_deficient;
    res.status = hit ? RecoveryStatus::Converged : RecoveryStatus::MaxIters;
    return res;
}

namespace detail {

struct SpikeStep {
    SpikeStream x;
    bool rank_deficient = false;
};

// One spike-stream update with the pulse fixed: proxy, model support of
// the proxy, merge with the current support, least squares, prune.
inline SpikeStep spike_update(const Vector& y, const SamplingMatrix& phi, const PulseModel& model,
                              const SpikeStream& x, const ImpulseResponse& h, const RecoveryConfig& cfg) {
    const Domain& d = model.domain;
    const Vector residual = y - phi.apply(convolve(x, h));
    const Vector proxy = CirculantOperator(h.dense(), d).apply_transpose(phi.apply_transpose(residual));
    const Support omega = model_support(proxy, d, model.spikes, model.separation);
    const Support merged = omega.merged(x.support());

    const auto ls = least_squares(spike_dictionary(h, merged.indices(), phi), y, cfg.rank_tol);
    Vector dense = Vector::Zero(d.size());
    for (Index i = 0; i < merged.size(); ++i) dense[merged.indices()[i]] = ls.coefficients[i];
    return {prune_to_model(dense, d, model.spikes, model.separation), ls.rank_deficient};
}

inline bool should_halt(const RecoveryConfig& cfg, double prev, double r) {
    if (r < cfg.residual_tol || r == 0.0) return true;
    if (cfg.halting == Halting::RelativeChange && std::abs(prev - r) <= cfg.rel_change_tol * prev) return true;
    return false;
}

}  // namespace detail

/**
 * Iterative support estimation. Each outer iteration forms the proxy
 * e = (Phi H)^T (y - Phi H x), takes the support of its best model
 * approximation, merges it with the current support, solves least squares
 * on the merged columns, prunes back to the model, then re-estimates the
 * pulse by least squares on (Phi X)_f and renormalizes it.
 *
 * The returned estimate is the lowest-residual iterate; residual_history
 * holds every iterate in order.
 */
inline RecoveryResult iterative_support_estimation(const Vector& y, const SamplingMatrix& phi,
                                                   const PulseModel& model, const RecoveryConfig& cfg,
                                                   const ImpulseResponse& h_init) {
    model.validate();
    cfg.validate();
    const Domain& d = model.domain;
    require(phi.cols() == d.size() && y.size() == phi.rows(), "measurement dimensions do not match");
    require(h_init.domain() == d && h_init.length() == model.pulse_length, "initial pulse does not match the model");
    const auto footprint = d.origin_patch(model.pulse_side());

    SpikeStream x = SpikeStream::zero(d);
    ImpulseResponse h = h_init;
    RecoveryResult best = detail::assemble(x, h);
    double best_r = y.norm();
    double prev = best_r;
    std::vector<double> history;
    bool rank_def = false;
    RecoveryStatus status = RecoveryStatus::MaxIters;
    Index it = 0;

    while (it < cfg.max_outer_iters) {
        ++it;
        auto step = detail::spike_update(y, phi, model, x, h, cfg);
        rank_def = rank_def || step.rank_deficient;
        if (detail::all_zero(step.x.values())) {
            history.push_back(y.norm());
            status = RecoveryStatus::Converged;
            break;
        }
        const auto lsh = least_squares(detail::pulse_dictionary(step.x, footprint, phi), y, cfg.rank_tol);
        rank_def = rank_def || lsh.rank_deficient;
        ImpulseResponse h_new(lsh.coefficients, d);
        if (!detail::normalize_pair(step.x, h_new)) {
            history.push_back(prev);
            break;
        }
        x = std::move(step.x);
        h = std::move(h_new);

        const Vector z = convolve(x, h);
        const double r = (y - phi.apply(z)).norm();
        history.push_back(r);
        if (r < best_r || best.x_hat.support().empty()) {
            best_r = r;
            best = detail::assemble(x, h);
        }
        if (detail::should_halt(cfg, prev, r)) {
            status = RecoveryStatus::Converged;
            break;
        }
        prev = r;
    }

    best.residual_history = std::move(history);
    best.iterations = it;
    best.status = status;
    best.rank_deficient = rank_def;
    return best;
}

/// Initial pulse of restart r: flat for r = 0, otherwise i.i.d. normal, unit norm.
inline ImpulseResponse restart_pulse(const PulseModel& model, std::uint64_t seed, Index r) {
    if (r == 0) return ImpulseResponse::flat(model.pulse_length, model.domain);
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    Vector c(model.pulse_length);
    do {
        for (Index i = 0; i < c.size(); ++i) c[i] = rng.normal();
    } while (c.norm() == 0.0);
    return ImpulseResponse(c / c.norm(), model.domain);
}

/**
 * Runs iterative support estimation from cfg.restarts initial pulses and
 * keeps the lowest final residual (ties to the earlier start). Stops early
 * once a start reaches a residual at or below cfg.residual_tol.
 */
inline RecoveryResult iterative_support_estimation(const Vector& y, const SamplingMatrix& phi,
                                                   const PulseModel& model, const RecoveryConfig& cfg) {
    cfg.validate();
    std::optional<RecoveryResult> best;
    double best_r = 0.0;
    for (Index r = 0; r < cfg.restarts; ++r) {
        auto res = iterative_support_estimation(y, phi, model, cfg, restart_pulse(model, cfg.restart_seed, r));
        const double rr = (y - phi.apply(res.z_hat)).norm();
        if (!best || rr < best_r) {
            best_r = rr;
            res.start = r;
            best = std::move(res);
        }
        if (best_r <= cfg.residual_tol) break;
    }
    return std::move(*best);
}

/// Spike-stream half of iterative support estimation with the pulse fixed at h_true.
inline RecoveryResult oracle_decoder(const Vector& y, const SamplingMatrix& phi, const ImpulseResponse& h_true,
                                     const PulseModel& model, const RecoveryConfig& cfg) {
    model.validate();
    cfg.validate();
    require(h_true.domain() == model.domain && h_true.length() == model.pulse_length,
            "oracle pulse does not match the model");
    require(std::abs(h_true.norm() - 1.0) < 1e-9, "oracle pulse must have unit norm");
    const Domain& d = model.domain;
    require(phi.cols() == d.size() && y.size() == phi.rows(), "measurement dimensions do not match");

    SpikeStream x = SpikeStream::zero(d);
    ImpulseResponse h = h_true;
    double prev = y.norm();
    double best_r = prev;
    RecoveryResult best = detail::assemble(x, h);
    std::vector<double> history;
    bool rank_def = false;
    RecoveryStatus status = RecoveryStatus::MaxIters;
    Index it = 0;
    while (it < cfg.max_outer_iters) {
        ++it;
        auto step = detail::spike_update(y, phi, model, x, h, cfg);
        rank_def = rank_def || step.rank_deficient;
        x = std::move(step.x);
        const double r = (y - phi.apply(convolve(x, h))).norm();
        history.push_back(r);
        if (r < best_r) {
            best_r = r;
            best = detail::assemble(x, h);
        }
        if (detail::all_zero(x.values()) || detail::should_halt(cfg, prev, r)) {
            status = RecoveryStatus::Converged;
            break;
        }
        prev = r;
    }
    // Sign convention: positive first pulse coefficient.
    detail::normalize_pair(best.x_hat, best.h_hat);
    best.z_hat = convolve(best.x_hat, best.h_hat);
    best.residual_history = std::move(history);
    best.iterations = it;
    best.status = status;
    best.rank_deficient = rank_def;
    return best;
}

// ---------------------------------------------------------------------------
// Baselines

namespace detail {

// Indices of the k largest |v| (ties to the lower index), sorted.
inline std::vector<Index> top_k(const Vector& v, Index k) {
    std::vector<Index> order(static_cast<std::size_t>(v.size()));
    std::iota(order.begin(), order.end(), Index{0});
    k = std::min<Index>(k, v.size());
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index a, Index b) {
        const double fa = std::abs(v[a]);
        const double fb = std::abs(v[b]);
        return fa != fb ? fa > fb : a < b;
    });
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end());
    return order;
}

inline Matrix phi_columns(const SamplingMatrix& phi, const std::vector<Index>& cols) {
    Matrix a = Matrix::Zero(phi.rows(), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        auto c = a.col(static_cast<Index>(i));
        phi.add_column(cols[i], 1.0, c);
    }
    return a;
}

inline std::vector<Index> union_sorted(const std::vector<Index>& a, const std::vector<Index>& b) {
    std::vector<Index> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<Index> nonzero_indices(const Vector& v) { return nonzeros(v); }

// Shared CoSaMP skeleton; `select(v, count)` returns the model support of v.
template <class Select>
Vector cosamp_loop(const Vector& y, const SamplingMatrix& phi, const RecoveryConfig& cfg, Select&& select) {
    cfg.validate();
    require(y.size() == phi.rows(), "measurement length must equal M");
    const Index n = phi.cols();
    Vector x = Vector::Zero(n);
    double r_norm = y.norm();
    if (r_norm == 0.0) return x;
    Vector r = y;
    Vector best = x;
    double best_norm = r_norm;
    for (Index it = 0; it < cfg.max_outer_iters; ++it) {
        const Vector proxy = phi.apply_transpose(r);
        const auto omega = select(proxy, true);
        const auto merged = union_sorted(omega, nonzero_indices(x));
        const auto ls = least_squares(phi_columns(phi, merged), y, cfg.rank_tol);
        Vector b = Vector::Zero(n);
        for (std::size_t i = 0; i < merged.size(); ++i) b[merged[i]] = ls.coefficients[static_cast<Index>(i)];
        const auto keep = select(b, false);
        Vector x_new = Vector::Zero(n);
        for (Index k : keep) x_new[k] = b[k];
        const Vector r_new = y - phi.apply(x_new);
        const double rn = r_new.norm();
        const double prev = r_norm;
        x = std::move(x_new);
        r = r_new;
        r_norm = rn;
        if (rn < best_norm) {
            best = x;
            best_norm = rn;
        }
        if (rn < cfg.residual_tol || rn == 0.0) break;
        if (cfg.halting == Halting::RelativeChange && std::abs(prev - rn) <= cfg.rel_change_tol * prev) break;
    }
    return best;
}

}  // namespace detail

/// CoSaMP: proxy, 2K largest, merge, least squares, prune to K.
inline Vector cosamp(const Vector& y, const SamplingMatrix& phi, Index k, const RecoveryConfig& cfg) {
    require(k >= 1, "CoSaMP needs K >= 1");
    return detail::cosamp_loop(y, phi, cfg, [k](const Vector& v, bool proxy) {
        return detail::top_k(v, proxy ? 2 * k : k);
    });
}

/**
 * Greedy selection of up to `count` non-overlapping blocks (the pulse
 * footprint shifted to each start) by block energy. Ties go to the lower
 * start; zero-energy blocks are never taken. Returns block starts, sorted.
 */
inline std::vector<Index> best_blocks(const Vector& energies, const Domain& d, Index count, Index side) {
    require(energies.size() == d.size(), "energy vector does not span the domain");
    const auto fp = d.origin_patch(side);
    Vector block(d.size());
    for (Index j = 0; j < d.size(); ++j) {
        double acc = 0.0;
        for (Index l : fp) acc += energies[d.add(l, j)];
        block[j] = acc;
    }
    std::vector<Index> order(static_cast<std::size_t>(d.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return block[a] > block[b]; });
    std::vector<Index> starts;
    for (Index j : order) {
        if (static_cast<Index>(starts.size()) >= count || block[j] <= 0.0) break;
        bool ok = true;
        for (Index q : starts) ok = ok && d.separated(q, j, side);
        if (ok) starts.push_back(j);
    }
    std::sort(starts.begin(), starts.end());
    return starts;
}

inline std::vector<Index> block_indices(const std::vector<Index>& starts, const Domain& d, Index side) {
    std::vector<Index> out;
    for (Index s : starts)
        for (Index l : d.origin_patch(side)) out.push_back(d.add(l, s));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Block-sparse CoSaMP: the pruning steps keep the best S (proxy: 2S) disjoint F-blocks.
inline Vector block_cosamp(const Vector& y, const SamplingMatrix& phi, const Domain& d, Index s, Index f,
                           const RecoveryConfig& cfg) {
    require(s >= 1 && f >= 1, "block CoSaMP needs S, F >= 1");
    require(s * f <= d.size(), "block CoSaMP needs S * F <= N");
    require(phi.cols() == d.size(), "sampling matrix width must equal N");
    const Index side = ImpulseResponse::side_for(f, d);
    return detail::cosamp_loop(y, phi, cfg, [&](const Vector& v, bool proxy) {
        const Vector c = v.array().square();
        return block_indices(best_blocks(c, d, proxy ? 2 * s : s, side), d, side);
    });
}

inline Vector block_cosamp(const Vector& y, const SamplingMatrix& phi, Index s, Index f, const RecoveryConfig& cfg) {
    return block_cosamp(y, phi, Domain(phi.cols()), s, f, cfg);
}

// ---------------------------------------------------------------------------
// Anchor pulse (Nyquist rate, pulse-shape mismatch)

/// sum_i c_i a_i^2 h_i / sum_i c_i^2 a_i^2 with c_i = <h_i, h_hat>.
inline Vector anchor_pulse_closed_form(const std::vector<Vector>& pulses, const Vector& alphas, const Vector& h_hat) {
    require(!pulses.empty(), "need at least one pulse");
    require(static_cast<Index>(pulses.size()) == alphas.size(), "one amplitude per pulse");
    Vector num = Vector::Zero(h_hat.size());
    double den = 0.0;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        require(pulses[i].size() == h_hat.size(), "pulses must all have length F");
        const double ci = pulses[i].dot(h_hat);
        const double a2 = alphas[static_cast<Index>(i)] * alphas[static_cast<Index>(i)];
        num += ci * a2 * pulses[i];
        den += ci * ci * a2;
    }
    require(den != 0.0, "anchor pulse denominator vanishes");
    return num / den;
}

/// Superposition sum_i alpha_i * shift_{s_i}(h_i) of individually shaped pulses.
inline Vector varying_pulse_signal(const std::vector<Vector>& pulses, const Vector& alphas, const Support& shifts) {
    require(static_cast<Index>(pulses.size()) == shifts.size() && alphas.size() == shifts.size(),
            "one pulse and one amplitude per shift");
    const Domain& d = shifts.domain();
    Vector z = Vector::Zero(d.size());
    for (Index i = 0; i < shifts.size(); ++i) {
        const ImpulseResponse hi(pulses[static_cast<std::size_t>(i)], d);
        const auto fp = hi.footprint();
        for (Index l = 0; l < hi.length(); ++l) z[d.add(fp[l], shifts.indices()[i])] += alphas[i] * hi.coefficients()[l];
    }
    return z;
}

struct AnchorResult {
    ImpulseResponse h;
    Index iterations = 0;
    bool converged = false;
};

/**
 * Nyquist-rate alternating minimization with the closed-form quasi-Toeplitz
 * pseudo-inverses: x_i = <shift_i(h), z> / ||h||^2, then h = X_f^T z / ||x||^2,
 * renormalized. Stops when consecutive pulses differ by < 1e-10 or after
 * max_inner_iters.
 */
inline AnchorResult anchor_pulse_fixed_point(const std::vector<Vector>& pulses, const Vector& alphas,
                                             const Support& shifts, const ImpulseResponse& h_init,
                                             const RecoveryConfig& cfg) {
    cfg.validate();
    const Domain& d = shifts.domain();
    require(h_init.domain() == d, "initial pulse lives on a different domain");
    const Vector z = varying_pulse_signal(pulses, alphas, shifts);
    const auto footprint = h_init.footprint();

    AnchorResult out;
    out.h = ImpulseResponse(h_init.coefficients() / h_init.norm(), d);
    for (Index it = 0; it < cfg.max_inner_iters; ++it) {
        const Vector xs = quasi_toeplitz_pinv_apply(out.h, shifts, z);
        const double energy = xs.squaredNorm();
        require(energy > 0.0, "spike estimate vanished; initial pulse orthogonal to the data");
        const SpikeStream x(shifts, xs);
        const ColumnRestriction xf(CirculantOperator(x.dense(), d), footprint);
        Vector h_next = apply_restricted_transpose(xf, z) / energy;
        h_next /= h_next.norm();
        const double step = (h_next - out.h.coefficients()).norm();
        out.h = ImpulseResponse(h_next, d);
        out.iterations = it + 1;
        if (step < 1e-10) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace pulsestream
