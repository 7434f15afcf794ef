#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pulsestream {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an operation rejects its input (bad dimensions, infeasible model, ...).
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised for file-system and parse failures; carries the offending path in the message.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

inline Index positive_mod(Index a, Index n) {
    Index r = a % n;
    return r < 0 ? r + n : r;
}

/**
 * Circular 1D or 2D index space. 2D domains are row-major: linear index
 * k = row * cols + col. All index arithmetic wraps per axis.
 */
class Domain {
public:
    Domain() : Domain(1) {}
    explicit Domain(Index n) : shape_{n} { validate(); }
    Domain(Index rows, Index cols) : shape_{rows, cols} { validate(); }
    explicit Domain(std::vector<Index> shape) : shape_(std::move(shape)) { validate(); }

    const std::vector<Index>& shape() const { return shape_; }
    Index dims() const { return static_cast<Index>(shape_.size()); }
    Index size() const {
        return std::accumulate(shape_.begin(), shape_.end(), Index{1}, std::multiplies<>());
    }

    /// Per-axis coordinates of a linear index.
    std::vector<Index> coords(Index k) const {
        std::vector<Index> c(shape_.size());
        for (Index a = dims() - 1; a >= 0; --a) {
            c[a] = k % shape_[a];
            k /= shape_[a];
        }
        return c;
    }

    Index linear(const std::vector<Index>& c) const {
        Index k = 0;
        for (Index a = 0; a < dims(); ++a) k = k * shape_[a] + positive_mod(c[a], shape_[a]);
        return k;
    }

    /// Index of (a + b) with per-axis wraparound.
    Index add(Index a, Index b) const {
        if (dims() == 1) return (a + b) % shape_[0];
        const Index cols = shape_[1];
        const Index r = (a / cols + b / cols) % shape_[0];
        const Index c = (a % cols + b % cols) % cols;
        return r * cols + c;
    }

    /// Index of (a - b) with per-axis wraparound.
    Index sub(Index a, Index b) const {
        if (dims() == 1) return positive_mod(a - b, shape_[0]);
        const Index cols = shape_[1];
        const Index r = positive_mod(a / cols - b / cols, shape_[0]);
        const Index c = positive_mod(a % cols - b % cols, cols);
        return r * cols + c;
    }

    /// Per-axis circular distance between two linear indices.
    std::vector<Index> axis_distances(Index a, Index b) const {
        const auto ca = coords(a);
        const auto cb = coords(b);
        std::vector<Index> d(shape_.size());
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            const Index fwd = positive_mod(ca[i] - cb[i], shape_[i]);
            d[i] = std::min(fwd, shape_[i] - fwd);
        }
        return d;
    }

    /// True when a and b do not share a hypercube of the given side, i.e.
    /// some axis has circular distance >= side.
    bool separated(Index a, Index b, Index side) const {
        for (Index d : axis_distances(a, b))
            if (d >= side) return true;
        return false;
    }

    /// Linear indices of the origin-anchored hypercube with the given side.
    std::vector<Index> origin_patch(Index side) const {
        std::vector<Index> out;
        if (dims() == 1) {
            for (Index i = 0; i < side; ++i) out.push_back(i);
            return out;
        }
        for (Index r = 0; r < side; ++r)
            for (Index c = 0; c < side; ++c) out.push_back(r * shape_[1] + c);
        return out;
    }

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    void validate() const {
        require(shape_.size() == 1 || shape_.size() == 2, "domain must be 1D or 2D");
        for (Index s : shape_) require(s >= 1, "domain shape entries must be >= 1");
    }

    std::vector<Index> shape_;
};

/// Strictly sorted set of domain indices.
class Support {
public:
    Support() = default;
    Support(std::vector<Index> indices, Domain domain) : indices_(std::move(indices)), domain_(std::move(domain)) {
        std::sort(indices_.begin(), indices_.end());
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            require(indices_[i] >= 0 && indices_[i] < domain_.size(), "support index out of range");
            require(i == 0 || indices_[i] != indices_[i - 1], "duplicate support index");
        }
    }
    Support(std::initializer_list<Index> indices, Domain domain)
        : Support(std::vector<Index>(indices), std::move(domain)) {}

    const std::vector<Index>& indices() const { return indices_; }
    const Domain& domain() const { return domain_; }
    Index size() const { return static_cast<Index>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    bool contains(Index k) const { return std::binary_search(indices_.begin(), indices_.end(), k); }

    Support merged(const Support& other) const {
        std::vector<Index> out;
        std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                       std::back_inserter(out));
        return Support(std::move(out), domain_);
    }

    friend bool operator==(const Support& a, const Support& b) {
        return a.indices_ == b.indices_ && a.domain_ == b.domain_;
    }
    /// Lexicographic order of the sorted index lists.
    friend bool operator<(const Support& a, const Support& b) { return a.indices_ < b.indices_; }

private:
    std::vector<Index> indices_;
    Domain domain_;
};

/// Indices of the nonzero entries of a dense vector.
inline Support nonzero_support(const Vector& v, const Domain& domain) {
    std::vector<Index> idx;
    for (Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) idx.push_back(i);
    return Support(std::move(idx), domain);
}

class SpikeStream {
public:
    SpikeStream() = default;
    SpikeStream(Support support, Vector values) : support_(std::move(support)), values_(std::move(values)) {
        require(values_.size() == support_.size(), "spike values must match support cardinality");
        require(values_.allFinite(), "spike values must be finite");
    }

    static SpikeStream zero(const Domain& d) { return SpikeStream(Support({}, d), Vector()); }

    /// Keeps the entries of `dense` on `support`.
    static SpikeStream restrict(const Vector& dense, const Support& support) {
        Vector v(support.size());
        for (Index i = 0; i < support.size(); ++i) v[i] = dense[support.indices()[i]];
        return SpikeStream(support, std::move(v));
    }

    const Support& support() const { return support_; }
    const Vector& values() const { return values_; }
    const Domain& domain() const { return support_.domain(); }

    Vector dense() const {
        Vector out = Vector::Zero(domain().size());
        for (Index i = 0; i < support_.size(); ++i) out[support_.indices()[i]] = values_[i];
        return out;
    }

    SpikeStream scaled(double s) const { return SpikeStream(support_, values_ * s); }

private:
    Support support_;
    Vector values_;
};

/**
 * Pulse shape concentrated at the domain origin. In 1D the coefficients
 * occupy indices [0, F); in 2D they fill a side x side patch stored
 * row-major, with F = side * side.
 */
class ImpulseResponse {
public:
    ImpulseResponse() = default;
    ImpulseResponse(Vector coefficients, Domain domain) : coeffs_(std::move(coefficients)), domain_(std::move(domain)) {
        require(coeffs_.size() >= 1, "impulse response needs at least one coefficient");
        require(coeffs_.allFinite(), "impulse response must be finite");
        side_ = side_for(coeffs_.size(), domain_);
    }

    /// Flat initial estimate 1_F / sqrt(F).
    static ImpulseResponse flat(Index f, const Domain& d) {
        return ImpulseResponse(Vector::Constant(f, 1.0 / std::sqrt(static_cast<double>(f))), d);
    }

    static Index side_for(Index f, const Domain& d) {
        if (d.dims() == 1) {
            require(f <= d.size(), "impulse response longer than domain");
            return f;
        }
        const auto s = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(f))));
        require(s * s == f, "2D impulse response size must be a perfect square");
        require(s <= d.shape()[0] && s <= d.shape()[1], "impulse response patch exceeds domain");
        return s;
    }

    const Vector& coefficients() const { return coeffs_; }
    const Domain& domain() const { return domain_; }
    Index length() const { return coeffs_.size(); }
    Index side() const { return side_; }
    double norm() const { return coeffs_.norm(); }

    /// Domain indices occupied by the coefficients, in coefficient order.
    std::vector<Index> footprint() const { return domain_.origin_patch(side_); }

    Vector dense() const {
        Vector out = Vector::Zero(domain_.size());
        const auto fp = footprint();
        for (Index i = 0; i < length(); ++i) out[fp[i]] = coeffs_[i];
        return out;
    }

    /// Gathers the footprint entries of a dense vector.
    static ImpulseResponse from_dense(const Vector& dense, Index f, const Domain& d) {
        const auto fp = d.origin_patch(side_for(f, d));
        Vector c(f);
        for (Index i = 0; i < f; ++i) c[i] = dense[fp[i]];
        return ImpulseResponse(std::move(c), d);
    }

private:
    Vector coeffs_;
    Domain domain_;
    Index side_ = 0;
};

/// Parameters of the disjoint pulse stream model M(S, F, Delta).
struct PulseModel {
    Domain domain;
    Index spikes = 1;        // S
    Index pulse_length = 1;  // F (total coefficient count; side^2 in 2D)
    Index separation = 1;    // Delta (hypercube side in 2D)

    PulseModel() = default;
    PulseModel(Domain d, Index s, Index f, Index delta)
        : domain(std::move(d)), spikes(s), pulse_length(f), separation(delta) {
        validate();
    }

    Index pulse_side() const { return ImpulseResponse::side_for(pulse_length, domain); }
    Index sparsity() const { return spikes * pulse_length; }

    void validate() const {
        require(spikes >= 1, "S must be >= 1");
        require(pulse_length >= 1, "F must be >= 1");
        require(separation >= 1, "Delta must be >= 1");
        require(separation >= pulse_side(), "Delta must be >= F (pulse side in 2D)");
        Index cell = 1;
        for (Index a = 0; a < domain.dims(); ++a) {
            require(separation <= domain.shape()[a], "Delta exceeds domain extent");
            cell *= separation;
        }
        require(spikes * cell <= domain.size(), "infeasible packing: S * Delta^dims > N");
    }
};

}  // namespace pulsestream
