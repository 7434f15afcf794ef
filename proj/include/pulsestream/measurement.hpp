#pragma once

#include "core.hpp"

#include <cstdint>
#include <memory>

namespace pulsestream {

/**
 * M x N measurement operator. Either a dense matrix (regenerated from
 * (M, N, seed), never serialized) or the identity on R^N, which is the
 * Nyquist-rate case and costs nothing to apply.
 */
class SamplingMatrix {
public:
    SamplingMatrix() = default;
    SamplingMatrix(Matrix entries, std::uint64_t seed)
        : entries_(std::make_shared<const Matrix>(std::move(entries))), seed_(seed) {
        rows_ = entries_->rows();
        cols_ = entries_->cols();
    }

    static SamplingMatrix identity(Index n) {
        SamplingMatrix m;
        m.rows_ = n;
        m.cols_ = n;
        return m;
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    std::uint64_t seed() const { return seed_; }
    bool is_identity() const { return !entries_; }

    /// Dense entries; materializes the identity on demand.
    Matrix dense() const { return entries_ ? *entries_ : Matrix::Identity(rows_, cols_); }

    Vector apply(const Vector& z) const {
        require(z.size() == cols_, "measurement operand length must equal N");
        if (!entries_) return z;
        return (*entries_) * z;
    }

    Vector apply_transpose(const Vector& r) const {
        require(r.size() == rows_, "adjoint operand length must equal M");
        if (!entries_) return r;
        return entries_->transpose() * r;
    }

    /// Adds scale * (column k) to out.
    void add_column(Index k, double scale, Eigen::Ref<Vector> out) const {
        if (!entries_) {
            out[k] += scale;
            return;
        }
        out.noalias() += scale * entries_->col(k);
    }

private:
    std::shared_ptr<const Matrix> entries_;
    Index rows_ = 0;
    Index cols_ = 0;
    std::uint64_t seed_ = 0;
};

}  // namespace pulsestream
