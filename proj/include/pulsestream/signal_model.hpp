#pragma once

#include "core.hpp"
#include "rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <optional>

namespace pulsestream {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline std::vector<Index> nonzeros(const Vector& v) {
    std::vector<Index> nz;
    for (Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) nz.push_back(i);
    return nz;
}

// Total order on operands used to pick which one drives the outer loop.
inline bool operand_precedes(const Vector& a, const std::vector<Index>& nza, const Vector& b,
                             const std::vector<Index>& nzb) {
    if (nza.size() != nzb.size()) return nza.size() < nzb.size();
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace detail

/**
 * Circular convolution z[k] = sum_j a[j] * b[(k - j) mod shape], per axis in 2D.
 *
 * Evaluated by direct summation over the nonzeros of both operands. The
 * operand that drives the outer loop is chosen by a fixed total order
 * (fewer nonzeros first, then lexicographic), so convolve(a, b) and
 * convolve(b, a) perform the same floating-point operations and agree
 * bit for bit.
 */
inline Vector circular_convolve(const Vector& a, const Vector& b, const Domain& domain) {
    require(a.size() == domain.size() && b.size() == domain.size(), "convolution operands must match the domain");
    const auto nza = detail::nonzeros(a);
    const auto nzb = detail::nonzeros(b);
    const bool a_outer = !detail::operand_precedes(b, nzb, a, nza);
    const Vector& outer = a_outer ? a : b;
    const Vector& inner = a_outer ? b : a;
    const auto& nz_outer = a_outer ? nza : nzb;
    const auto& nz_inner = a_outer ? nzb : nza;

    Vector z = Vector::Zero(domain.size());
    for (Index j : nz_outer)
        for (Index l : nz_inner) z[domain.add(j, l)] += outer[j] * inner[l];
    return z;
}

inline Vector convolve(const SpikeStream& x, const ImpulseResponse& h) {
    require(x.domain() == h.domain(), "spike stream and impulse response live on different domains");
    return circular_convolve(x.dense(), h.dense(), x.domain());
}

/// |support| <= S and every pair circularly separated by at least Delta.
inline bool is_in_model(const Support& support, const PulseModel& model) {
    if (support.size() > model.spikes) return false;
    const auto& idx = support.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            if (!model.domain.separated(idx[i], idx[j], model.separation)) return false;
    return true;
}

/// Pairwise circular separation test for a bare 1D index list.
inline bool circularly_separated(const std::vector<Index>& sorted, Index n, Index delta) {
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] - sorted[i - 1] < delta) return false;
    if (sorted.size() >= 2 && n - (sorted.back() - sorted.front()) < delta) return false;
    return true;
}

inline BigInt binomial(Index n, Index k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (Index i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// Subspace count C(N - S*Delta + S - 1, S - 1) of the separated spike model; 0 when S*Delta > N.
inline BigInt count_supports(Index n, Index s, Index delta) {
    require(s >= 1 && delta >= 1 && n >= 1, "count_supports needs N, S, Delta >= 1");
    if (s * delta > n) return 0;
    return binomial(n - s * delta + s - 1, s - 1);
}

/**
 * Exact number of size-S index sets on the N-cycle with pairwise circular
 * gap >= Delta: (N / S) * C(N - S*(Delta - 1) - 1, S - 1). This is what
 * enumerate_supports produces; it equals (N / S) * count_supports.
 */
inline BigInt count_circular_supports(Index n, Index s, Index delta) {
    require(s >= 1 && delta >= 1 && n >= 1, "count_circular_supports needs N, S, Delta >= 1");
    if (s * delta > n) return 0;
    if (s == 1) return n;
    BigInt r = binomial(n - s * (delta - 1) - 1, s - 1) * n;
    return r / s;
}

/// Natural log of a positive big integer.
inline double log_bigint(const BigInt& v) {
    require(v > 0, "log of non-positive integer");
    const auto bits = static_cast<Index>(boost::multiprecision::msb(v)) + 1;
    if (bits <= 52) return std::log(v.convert_to<double>());
    const Index shift = bits - 53;
    const BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

/**
 * Lazily walks every size-S support on the N-cycle whose members are
 * pairwise circularly separated by >= Delta, in lexicographic order.
 */
class SupportEnumerator {
public:
    SupportEnumerator(Index n, Index s, Index delta) : n_(n), s_(s), delta_(delta), domain_(n) {
        require(n >= 1 && s >= 1 && delta >= 1, "enumerate_supports needs N, S, Delta >= 1");
        done_ = s * delta > n;
    }

    /// Advances to the next support; returns std::nullopt when exhausted.
    std::optional<Support> next() {
        if (done_) return std::nullopt;
        if (!started_) {
            started_ = true;
            cur_.assign(static_cast<std::size_t>(s_), 0);
            fill_from(1);
            return Support(cur_, domain_);
        }
        for (Index p = s_ - 1; p >= 0; --p) {
            const auto up = static_cast<std::size_t>(p);
            if (cur_[up] + 1 <= upper(p)) {
                cur_[up] += 1;
                fill_from(p + 1);
                return Support(cur_, domain_);
            }
        }
        done_ = true;
        return std::nullopt;
    }

private:
    // Largest value at depth p that still admits a completion; slots
    // after p are packed at exactly Delta, and the last one must stay
    // Delta away from the first across the wrap.
    Index upper(Index p) const {
        const Index tail = (s_ - 1 - p) * delta_;
        if (p == 0) return n_ - 1 - tail;
        return std::min(n_ - 1, cur_.front() + n_ - delta_) - tail;
    }

    void fill_from(Index p) {
        for (Index q = p; q < s_; ++q)
            cur_[static_cast<std::size_t>(q)] = cur_[static_cast<std::size_t>(q - 1)] + delta_;
    }

    Index n_, s_, delta_;
    Domain domain_;
    std::vector<Index> cur_;
    bool started_ = false;
    bool done_ = false;
};

inline std::vector<Support> enumerate_supports(Index n, Index s, Index delta) {
    std::vector<Support> out;
    SupportEnumerator it(n, s, delta);
    while (auto sup = it.next()) out.push_back(std::move(*sup));
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic instances

struct Distribution {
    enum class Kind { Gaussian, Uniform, Rademacher };
    Kind kind = Kind::Gaussian;
    double scale = 1.0;

    double draw(Rng& rng) const {
        switch (kind) {
            case Kind::Uniform: return scale * (2.0 * rng.uniform() - 1.0);
            case Kind::Rademacher: return scale * rng.sign();
            case Kind::Gaussian: break;
        }
        return scale * rng.normal();
    }
};

struct PulseInstance {
    SpikeStream x;
    ImpulseResponse h;
    Vector z;
    bool uniform_support = true;  // false when the sequential-gap fallback was used
};

namespace detail {

inline std::optional<Support> rejection_support(const PulseModel& model, Rng& rng, Index max_draws) {
    const Index n = model.domain.size();
    std::vector<Index> idx;
    for (Index draw = 0; draw < max_draws; ++draw) {
        idx.clear();
        while (static_cast<Index>(idx.size()) < model.spikes) {
            const Index k = rng.below(n);
            if (std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
        }
        Support s(idx, model.domain);
        if (is_in_model(s, model)) return s;
    }
    return std::nullopt;
}

// 1D: random composition of the slack N - S*Delta over S gaps, random rotation.
inline std::optional<Support> gap_support(const PulseModel& model, Rng& rng) {
    const Index n = model.domain.size();
    const Index s = model.spikes;
    const Index delta = model.separation;
    if (model.domain.dims() == 1) {
        const Index slack = n - s * delta;
        std::vector<Index> extra(static_cast<std::size_t>(s), 0);
        for (Index u = 0; u < slack; ++u) extra[static_cast<std::size_t>(rng.below(s))] += 1;
        const Index offset = rng.below(n);
        std::vector<Index> idx;
        Index pos = 0;
        for (Index i = 0; i < s; ++i) {
            idx.push_back((pos + offset) % n);
            pos += delta + extra[static_cast<std::size_t>(i)];
        }
        return Support(idx, model.domain);
    }
    // 2D: sequential random placement against the already placed spikes.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Index> idx;
        for (Index tries = 0; tries < 100 * n && static_cast<Index>(idx.size()) < s; ++tries) {
            const Index k = rng.below(n);
            bool ok = true;
            for (Index j : idx) ok = ok && model.domain.separated(j, k, delta);
            if (ok) idx.push_back(k);
        }
        if (static_cast<Index>(idx.size()) == s) return Support(idx, model.domain);
    }
    return std::nullopt;
}

}  // namespace detail

/**
 * Draws a pulse stream from M(S, F, Delta): support by rejection sampling
 * (uniform over admissible configurations), amplitudes and pulse by the
 * given distributions, pulse scaled to unit norm. After 10*S*N rejected
 * draws the support is built by sequential gap placement instead and the
 * instance is marked non-uniform; with allow_fallback = false that case
 * throws.
 */
inline PulseInstance random_instance(const PulseModel& model, const Distribution& amplitudes,
                                     const Distribution& pulse, std::uint64_t seed, bool allow_fallback = true) {
    model.validate();
    Rng rng(seed);
    const Index n = model.domain.size();
    PulseInstance inst;
    auto support = detail::rejection_support(model, rng, 10 * model.spikes * n);
    if (!support) {
        if (!allow_fallback)
            throw InvalidArgument("rejection sampling exceeded its retry cap; the packing is too tight, "
                                  "enable the sequential-gap fallback");
        support = detail::gap_support(model, rng);
        inst.uniform_support = false;
        if (!support) throw InvalidArgument("could not place spikes for this model");
    }

    Vector amps(model.spikes);
    for (Index i = 0; i < model.spikes; ++i) {
        do {
            amps[i] = amplitudes.draw(rng);
        } while (amps[i] == 0.0);
    }
    Vector coeffs(model.pulse_length);
    do {
        for (Index i = 0; i < model.pulse_length; ++i) coeffs[i] = pulse.draw(rng);
    } while (coeffs.norm() == 0.0);
    coeffs /= coeffs.norm();

    inst.x = SpikeStream(*support, amps);
    inst.h = ImpulseResponse(coeffs, model.domain);
    inst.z = convolve(inst.x, inst.h);
    return inst;
}

inline PulseInstance random_instance(const PulseModel& model, std::uint64_t seed) {
    return random_instance(model, Distribution{}, Distribution{}, seed);
}

}  // namespace pulsestream
