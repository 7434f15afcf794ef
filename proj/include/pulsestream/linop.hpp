#pragma once

#include "core.hpp"
#include "measurement.hpp"
#include "signal_model.hpp"

namespace pulsestream {

/// Circulant matrix whose column j is the generator circularly shifted by j.
class CirculantOperator {
public:
    CirculantOperator(Vector generator, Domain domain) : generator_(std::move(generator)), domain_(std::move(domain)) {
        require(generator_.size() == domain_.size(), "circulant generator must span the domain");
        nz_ = detail::nonzeros(generator_);
    }

    const Vector& generator() const { return generator_; }
    const Domain& domain() const { return domain_; }
    const std::vector<Index>& generator_nonzeros() const { return nz_; }

    Vector apply(const Vector& x) const { return circular_convolve(generator_, x, domain_); }

    Vector column(Index j) const {
        Vector c = Vector::Zero(domain_.size());
        for (Index l : nz_) c[domain_.add(l, j)] = generator_[l];
        return c;
    }

    /// Transpose applied to w: out[j] = sum_l g[l] * w[l + j] (circular correlation).
    Vector apply_transpose(const Vector& w) const {
        require(w.size() == domain_.size(), "adjoint operand must span the domain");
        Vector out = Vector::Zero(domain_.size());
        for (Index j = 0; j < domain_.size(); ++j) {
            double acc = 0.0;
            for (Index l : nz_) acc += generator_[l] * w[domain_.add(l, j)];
            out[j] = acc;
        }
        return out;
    }

private:
    Vector generator_;
    Domain domain_;
    std::vector<Index> nz_;
};

/**
 * The submatrix (Phi * C(g))_columns. `columns` is either a spike support
 * (dictionary for x given h) or the pulse footprint (dictionary for h given x).
 * Phi defaults to the identity.
 */
class ColumnRestriction {
public:
    ColumnRestriction(CirculantOperator op, std::vector<Index> columns, SamplingMatrix phi)
        : op_(std::move(op)), columns_(std::move(columns)), phi_(std::move(phi)) {
        require(phi_.cols() == op_.domain().size(), "sampling matrix width must equal N");
        for (Index c : columns_) require(c >= 0 && c < op_.domain().size(), "restriction column out of range");
    }
    ColumnRestriction(CirculantOperator op, std::vector<Index> columns)
        : ColumnRestriction(op, std::move(columns), SamplingMatrix::identity(op.domain().size())) {}

    const CirculantOperator& op() const { return op_; }
    const std::vector<Index>& columns() const { return columns_; }
    const SamplingMatrix& phi() const { return phi_; }
    Index rows() const { return phi_.rows(); }
    Index cols() const { return static_cast<Index>(columns_.size()); }

    /// Explicit rows() x cols() dictionary.
    Matrix materialize() const {
        const Domain& d = op_.domain();
        const Vector& g = op_.generator();
        Matrix a = Matrix::Zero(rows(), cols());
        for (Index i = 0; i < cols(); ++i) {
            auto col = a.col(i);
            for (Index l : op_.generator_nonzeros()) phi_.add_column(d.add(l, columns_[i]), g[l], col);
        }
        return a;
    }

private:
    CirculantOperator op_;
    std::vector<Index> columns_;
    SamplingMatrix phi_;
};

inline Vector apply_restricted(const ColumnRestriction& r, const Vector& coeffs) {
    require(coeffs.size() == r.cols(), "coefficient count must equal the number of retained columns");
    const Domain& d = r.op().domain();
    const Vector& g = r.op().generator();
    Vector dense = Vector::Zero(d.size());
    for (Index i = 0; i < r.cols(); ++i) {
        if (coeffs[i] == 0.0) continue;
        for (Index l : r.op().generator_nonzeros()) dense[d.add(l, r.columns()[i])] += g[l] * coeffs[i];
    }
    return r.phi().apply(dense);
}

inline Vector apply_restricted_transpose(const ColumnRestriction& r, const Vector& v) {
    require(v.size() == r.rows(), "adjoint operand length must equal the row count");
    const Domain& d = r.op().domain();
    const Vector& g = r.op().generator();
    const Vector w = r.phi().apply_transpose(v);
    Vector out(r.cols());
    for (Index i = 0; i < r.cols(); ++i) {
        double acc = 0.0;
        for (Index l : r.op().generator_nonzeros()) acc += g[l] * w[d.add(l, r.columns()[i])];
        out[i] = acc;
    }
    return out;
}

struct LeastSquaresReport {
    Vector coefficients;
    double residual_norm = 0.0;
    bool rank_deficient = false;
};

constexpr double kDefaultRankTol = 1e-10;

/**
 * min ||y - A c||_2 through a complete orthogonal decomposition (column
 * pivoted QR followed by an RZ step), which returns the minimum-norm
 * minimizer when A is rank deficient. Pivots below tol * (largest pivot)
 * count as zero.
 */
inline LeastSquaresReport least_squares(const Matrix& a, const Vector& y, double tol = kDefaultRankTol) {
    require(a.rows() == y.size(), "least squares: row count must equal measurement length");
    LeastSquaresReport rep;
    if (a.cols() == 0) {
        rep.coefficients = Vector();
        rep.residual_norm = y.norm();
        return rep;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(tol);
    cod.compute(a);
    rep.coefficients = cod.solve(y);
    rep.rank_deficient = cod.rank() < a.cols();
    rep.residual_norm = (y - a * rep.coefficients).norm();
    return rep;
}

inline LeastSquaresReport least_squares(const ColumnRestriction& r, const Vector& y, double tol = kDefaultRankTol) {
    require(y.size() == r.rows(), "least squares: y length must equal the operator output dimension");
    return least_squares(r.materialize(), y, tol);
}

/**
 * Closed-form pseudo-inverse of the quasi-Toeplitz matrix H_sigma (shifts of
 * h at the support, no two overlapping): the columns are orthogonal with
 * squared norm ||h||^2, so H_sigma^+ y = H_sigma^T y / ||h||^2.
 */
inline Vector quasi_toeplitz_pinv_apply(const ImpulseResponse& h, const Support& support, const Vector& y) {
    const Domain& d = h.domain();
    require(support.domain() == d, "support and impulse response domains differ");
    require(y.size() == d.size(), "y must be a dense vector over the domain");
    const auto& idx = support.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            require(d.separated(idx[i], idx[j], h.side()),
                    "support is not separated by the pulse length; the closed form does not apply");
    const double energy = h.coefficients().squaredNorm();
    require(energy > 0.0, "impulse response is zero");
    const auto fp = h.footprint();
    Vector out(support.size());
    for (Index i = 0; i < support.size(); ++i) {
        double acc = 0.0;
        for (Index l = 0; l < h.length(); ++l) acc += h.coefficients()[l] * y[d.add(fp[l], idx[i])];
        out[i] = acc / energy;
    }
    return out;
}

}  // namespace pulsestream
