#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dme/util/rng.hpp"

namespace dme::nn {

// Dense row-major float64 matrix. The only tensor rank in this codebase;
// batching is an explicit loop at the call site.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_)
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            std::size_t c = 0;
            for (double v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    static Matrix seeded_uniform(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng) {
        Matrix m(rows, cols);
        for (double& v : m.data_) v = rng.uniform(lo, hi);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace detail {
inline void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}
} // namespace detail

// C += A * B (or C = A * B when accumulate is false). i-k-j order keeps the
// inner loop contiguous in both B and C.
inline void matmul_into(Matrix& c, const Matrix& a, const Matrix& b, bool accumulate) {
    detail::require(a.cols() == b.rows(),
                    "matmul: inner dimensions differ: " + a.shape_str() + " vs " + b.shape_str());
    if (!accumulate) c = Matrix(a.rows(), b.cols());
    detail::require(c.rows() == a.rows() && c.cols() == b.cols(), "matmul: bad output shape");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a.data() + i * k;
        double* crow = c.data() + i * m;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            if (av == 0.0) continue;
            const double* brow = b.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c;
    matmul_into(c, a, b, false);
    return c;
}

// C += A * B^T
inline void matmul_nt_acc(Matrix& c, const Matrix& a, const Matrix& b) {
    detail::require(a.cols() == b.cols(),
                    "matmul_nt: inner dimensions differ: " + a.shape_str() + " vs " + b.shape_str());
    detail::require(c.rows() == a.rows() && c.cols() == b.rows(), "matmul_nt: bad output shape");
    const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a.data() + i * k;
        double* crow = c.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) {
            const double* brow = b.data() + j * k;
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
            crow[j] += acc;
        }
    }
}

// C += A^T * B
inline void matmul_tn_acc(Matrix& c, const Matrix& a, const Matrix& b) {
    detail::require(a.rows() == b.rows(),
                    "matmul_tn: inner dimensions differ: " + a.shape_str() + " vs " + b.shape_str());
    detail::require(c.rows() == a.cols() && c.cols() == b.cols(), "matmul_tn: bad output shape");
    const std::size_t n = a.cols(), k = a.rows(), m = b.cols();
    for (std::size_t p = 0; p < k; ++p) {
        const double* arow = a.data() + p * n;
        const double* brow = b.data() + p * m;
        for (std::size_t i = 0; i < n; ++i) {
            const double av = arow[i];
            if (av == 0.0) continue;
            double* crow = c.data() + i * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
    return t;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
    detail::require(a.same_shape(b), "add: shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

inline Matrix sub(const Matrix& a, const Matrix& b) {
    detail::require(a.same_shape(b), "sub: shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

inline Matrix scale(const Matrix& a, double s) {
    Matrix c = a;
    for (double& v : c.values()) v *= s;
    return c;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
    detail::require(a.same_shape(b),
                    "hadamard: shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] *= b.data()[i];
    return c;
}

// Row-wise softmax with max subtraction. Left-to-right summation keeps
// results reproducible.
inline Matrix softmax_rows(const Matrix& m) {
    detail::require(!m.empty(), "softmax_rows: empty matrix");
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double mx = m(r, 0);
        for (std::size_t c = 1; c < m.cols(); ++c) mx = std::max(mx, m(r, c));
        double sum = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double e = std::exp(m(r, c) - mx);
            out(r, c) = e;
            sum += e;
        }
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) /= sum;
    }
    return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    detail::require(a.same_shape(b),
                    "max_abs_diff: shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

} // namespace dme::nn
